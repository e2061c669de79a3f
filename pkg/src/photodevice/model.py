"""Device parameters, the four-state molecule, and bath occupation functions.

Units: energies in eV with hbar = 1, so rates ``Gamma`` and ``nu`` are in eV
and times in 1/eV.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import expit

from .errors import ConfigurationError, DomainError, InvalidParameterError

EXP_CLAMP = 700.0

BATH_IDS = ("l", "r", "gamma")
FERMIONIC_BATHS = ("l", "r")


def _check_finite(**values):
    for name, value in values.items():
        if not np.all(np.isfinite(value)):
            raise InvalidParameterError(f"{name} must be finite, got {value!r}")


def fermi_dirac(x, beta, mu):
    """Fermi-Dirac occupation ``1 / (exp(beta (x - mu)) + 1)``.

    Arguments of the exponential are clamped to +-700, so occupations
    saturate to exactly 0 or 1 beyond that.
    """
    _check_finite(x=x, beta=beta, mu=mu)
    if beta <= 0:
        raise InvalidParameterError(f"beta must be positive, got {beta}")
    arg = np.clip(beta * (np.asarray(x, dtype=float) - mu), -EXP_CLAMP, EXP_CLAMP)
    out = expit(-arg)
    if out.ndim == 0:
        out = out.item()
        if abs(arg) >= EXP_CLAMP:
            out = 0.0 if arg > 0 else 1.0
    else:
        out = np.where(arg >= EXP_CLAMP, 0.0, np.where(arg <= -EXP_CLAMP, 1.0, out))
    return out


def fermi_dirac_hole(x, beta, mu):
    """``1 - f(x)`` evaluated without cancellation."""
    return fermi_dirac(2.0 * mu - x, beta, mu)


def bose_einstein(x, beta_gamma):
    """Bose-Einstein occupation ``1 / (exp(beta_gamma x) - 1)`` for ``x > 0``."""
    _check_finite(x=x, beta_gamma=beta_gamma)
    if beta_gamma <= 0:
        raise InvalidParameterError(f"beta_gamma must be positive, got {beta_gamma}")
    if x <= 0:
        raise DomainError(f"Bose-Einstein occupation needs x > 0, got {x}")
    arg = beta_gamma * x
    if arg >= EXP_CLAMP:
        return 0.0
    return 1.0 / math.expm1(arg)


@dataclass(frozen=True)
class DeviceParams:
    """Scalar parameters of the photodevice.

    Defaults are the room-temperature / sun-temperature values used for the
    conductance and thermodynamics benchmarks.
    """

    eps_H: float = -1.0
    eps_L: float = 2.0
    U: float = 0.0
    mu: float = 0.0
    V: float = 0.0
    beta: float = 39.2
    beta_gamma: float = 2.0
    Gamma: float = 1.0
    z: float = 1.0
    nu: float = 0.0

    def __post_init__(self):
        _check_finite(**{k: getattr(self, k) for k in self.__dataclass_fields__})
        if not self.eps_L > self.eps_H:
            raise InvalidParameterError("eps_L must exceed eps_H")
        if self.U < 0:
            raise InvalidParameterError(f"U must be >= 0, got {self.U}")
        if not 0.0 <= self.z <= 1.0:
            raise InvalidParameterError(f"z must lie in [0, 1], got {self.z}")
        if self.V < 0:
            raise InvalidParameterError(f"V must be >= 0, got {self.V}")
        if self.Gamma <= 0:
            raise InvalidParameterError(f"Gamma must be > 0, got {self.Gamma}")
        if self.nu < 0:
            raise InvalidParameterError(f"nu must be >= 0, got {self.nu}")
        if not self.beta > self.beta_gamma > 0:
            raise InvalidParameterError("need beta > beta_gamma > 0")
        if not self.eps_H <= self.mu <= self.eps_L:
            warnings.warn(
                f"mu={self.mu} lies outside [eps_H, eps_L]=[{self.eps_H}, {self.eps_L}]",
                stacklevel=3,
            )

    @property
    def eta_C(self) -> float:
        """Carnot efficiency ``1 - beta_gamma / beta``."""
        return 1.0 - self.beta_gamma / self.beta

    def with_(self, **changes) -> "DeviceParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SystemSpec:
    """Eigenbasis |0>, |1>, |2>, |3> = empty, HOMO, LUMO, doubly occupied."""

    energies: tuple[float, float, float, float]
    particle_numbers: tuple[int, int, int, int] = (0, 1, 1, 2)
    bohr_frequencies: tuple[float, ...] = field(default=())

    @property
    def hamiltonian(self) -> np.ndarray:
        return np.diag(np.asarray(self.energies, dtype=complex))

    @property
    def number_operator(self) -> np.ndarray:
        return np.diag(np.asarray(self.particle_numbers, dtype=complex))


def build_system(params: DeviceParams) -> SystemSpec:
    eH, eL, U = params.eps_H, params.eps_L, params.U
    return SystemSpec(
        energies=(0.0, eH, eL, eH + eL + U),
        bohr_frequencies=(eH, eH + U, eL, eL + U, eL - eH),
    )


@dataclass(frozen=True)
class BathSpec:
    """One reservoir. Fermionic baths carry (beta, mu, gamma_H, gamma_L);
    the photon bath carries (beta, nu)."""

    id: str
    beta: float
    mu: float = 0.0
    gamma_H: float = 0.0
    gamma_L: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if self.id not in BATH_IDS:
            raise ConfigurationError(f"unknown bath id {self.id!r}")


def build_baths(params: DeviceParams, V: float | None = None) -> list[BathSpec]:
    """Leads l, r and the photon bath.

    ``V`` overrides ``params.V`` and may be negative (used by finite
    differences around zero bias).
    """
    bias = params.V if V is None else V
    G, zG = params.Gamma, params.z * params.Gamma
    return [
        BathSpec("l", params.beta, params.mu - bias / 2, gamma_H=G, gamma_L=zG),
        BathSpec("r", params.beta, params.mu + bias / 2, gamma_H=zG, gamma_L=G),
        BathSpec("gamma", params.beta_gamma, nu=params.nu),
    ]
