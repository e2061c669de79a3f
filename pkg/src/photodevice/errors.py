"""Exception types raised by the simulator."""


class PhotodeviceError(Exception):
    """Base class for all simulator errors."""


class InvalidParameterError(PhotodeviceError, ValueError):
    """A model parameter is non-finite or outside its allowed range."""


class DomainError(PhotodeviceError, ValueError):
    """A function was evaluated outside its mathematical domain."""


class ConfigurationError(PhotodeviceError, ValueError):
    """Malformed configuration (unknown bath, bad key, unparsable line)."""


class NonUniqueSteadyStateError(PhotodeviceError):
    """The generator has a kernel of dimension other than one."""

    def __init__(self, kernel_dim, detail=""):
        self.kernel_dim = kernel_dim
        msg = f"steady state is not unique: kernel dimension {kernel_dim}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class UndefinedPerformanceError(PhotodeviceError, ArithmeticError):
    """Coefficient of performance requested where the photon heat current vanishes."""


class SlowMixingError(PhotodeviceError):
    """Spectral gap too small for time-domain quadrature."""


class InvalidNoiseError(PhotodeviceError, ValueError):
    """Non-positive noise passed where a strictly positive value is required."""


class AbsorbingStateError(PhotodeviceError):
    """A Markov chain sampled by Gillespie has a state with no exits."""
