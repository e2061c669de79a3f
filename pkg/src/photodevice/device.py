"""One-call assembly of every object needed at a parameter point."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhotodeviceError
from .liouvillian import (
    JumpOperator,
    Liouvillian,
    SteadyState,
    build_jump_operators,
    build_liouvillian,
    certify,
    steady_state,
)
from .model import BathSpec, DeviceParams, SystemSpec, build_baths, build_system
from .rate_net import RateMatrix, rate_matrices, rate_steady_state, total_rate_matrix

POPULATION_AGREEMENT = 1e-10
COHERENCE_TOL = 1e-10


class OracleMismatchError(PhotodeviceError):
    """Lindblad and rate-network steady states disagree."""


@dataclass(frozen=True)
class DeviceSolution:
    params: DeviceParams
    bias: float
    system: SystemSpec
    baths: list[BathSpec]
    jumps: list[JumpOperator]
    liouvillian: Liouvillian
    rates: dict[str, RateMatrix]
    lindblad: SteadyState
    ness: SteadyState

    @property
    def rho(self) -> np.ndarray:
        return self.ness.rho

    @property
    def populations(self) -> np.ndarray:
        return self.ness.populations

    def bath(self, bath_id: str) -> BathSpec:
        return next(b for b in self.baths if b.id == bath_id)


def solve_device(params: DeviceParams, V: float | None = None) -> DeviceSolution:
    """Build the generator at ``params`` (bias ``V`` if given) and its NESS.

    ``lindblad`` is the bordered-LU solution with its certificates. ``ness``
    carries the same state with populations taken from the subtraction-free
    rate-network solve, which keeps exponentially small populations (and hence
    dark currents) accurate to full relative precision. The two must agree to
    ``POPULATION_AGREEMENT`` and the Lindblad coherences must vanish.
    """
    system = build_system(params)
    baths = build_baths(params, V)
    jumps = build_jump_operators(system, baths)
    L = build_liouvillian(system, jumps)
    lind = steady_state(L)
    rates = rate_matrices(jumps)
    p = rate_steady_state(total_rate_matrix(rates))

    diff = np.max(np.abs(lind.populations - p))
    coh = np.max(np.abs(lind.rho - np.diag(np.diag(lind.rho))))
    if diff > POPULATION_AGREEMENT or coh > COHERENCE_TOL:
        raise OracleMismatchError(f"population mismatch {diff:.3e}, coherence {coh:.3e}")
    ness = certify(L.matrix, np.diag(p).astype(complex))
    return DeviceSolution(
        params=params,
        bias=params.V if V is None else V,
        system=system,
        baths=baths,
        jumps=jumps,
        liouvillian=L,
        rates=rates,
        lindblad=lind,
        ness=ness,
    )
