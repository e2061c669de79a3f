"""Steady-state counting statistics of weighted jump counts.

The noise is the long-time variance growth rate

    D = M + 2 * int_0^inf ( Tr[J e^{L t} J[rho]] - I^2 ) dt,

with ``J[.] = sum_k w_k L_k . L_k^dagger``, ``I = Tr J[rho]`` and
``M = sum_k w_k^2 Tr[L_k rho L_k^dagger]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.integrate as si
import scipy.linalg as la

from .errors import ConfigurationError, InvalidNoiseError, SlowMixingError
from .liouvillian import (
    FERMIONIC_TRANSITIONS,
    JumpOperator,
    Liouvillian,
    sandwich,
    solve_traceless,
    trace_functional,
    vec,
)

PARTICLE_IN = ("10", "32", "20", "31")
PARTICLE_OUT = ("01", "23", "02", "13")


@dataclass(frozen=True)
class CountingSpec:
    """Integer weights per channel label; unlisted channels weigh zero."""

    bath: str
    weights: dict[str, float] = field(default_factory=dict)

    def weight(self, label: str) -> float:
        return self.weights.get(label, 0.0)

    def scaled(self, factor: float) -> "CountingSpec":
        return CountingSpec(self.bath, {k: factor * w for k, w in self.weights.items()})


def counting_spec_particles(bath: str) -> CountingSpec:
    """+1 for electrons entering from ``bath``, -1 for electrons leaving to it."""
    if bath not in ("l", "r"):
        raise ConfigurationError(f"particle counting needs a lead, got {bath!r}; use counting_spec_photons")
    w = {f"{bath}:{k}": 1 for k in PARTICLE_IN}
    w.update({f"{bath}:{k}": -1 for k in PARTICLE_OUT})
    assert len(w) == len(FERMIONIC_TRANSITIONS)
    return CountingSpec(bath, w)


def counting_spec_photons() -> CountingSpec:
    """+1 per emitted photon, -1 per absorbed photon."""
    return CountingSpec("gamma", {"gamma:12": 1, "gamma:21": -1})


def jump_superoperator(spec: CountingSpec, jumps: list[JumpOperator], power: int = 1) -> np.ndarray:
    out = np.zeros((16, 16), dtype=complex)
    for j in jumps:
        w = spec.weight(j.label)
        if w:
            out += (w ** power) * sandwich(j.matrix)
    return out


def _trace(v: np.ndarray) -> float:
    return float(np.real(trace_functional() @ v))


def average_current_fcs(spec: CountingSpec, jumps: list[JumpOperator], rho: np.ndarray) -> float:
    """``I = sum_k w_k Tr[L_k rho L_k^dagger]``."""
    return _trace(jump_superoperator(spec, jumps) @ vec(rho))


def dynamical_activity(spec: CountingSpec, jumps: list[JumpOperator], rho: np.ndarray) -> float:
    """``M = sum_k w_k^2 Tr[L_k rho L_k^dagger]``."""
    return _trace(jump_superoperator(spec, jumps, power=2) @ vec(rho))


def snr(J: float, D: float) -> float:
    if not D > 0:
        raise InvalidNoiseError(f"noise must be positive, got {D}")
    return J * J / D


@dataclass(frozen=True)
class NoiseReport:
    I: float
    M: float
    D: float
    snr: float | None
    method: str
    tail_bound: float = 0.0


def _report(I, M, D, method, tail=0.0):
    return NoiseReport(I=I, M=M, D=D, snr=snr(I, D) if D > 0 else None, method=method, tail_bound=tail)


def noise_drazin(spec: CountingSpec, L: Liouvillian, rho: np.ndarray) -> NoiseReport:
    """Noise from one bordered solve.

    With ``y = J[rho] - I rho`` and ``x`` the traceless solution of
    ``L x = y``, the time integral equals ``-Tr[J x]``, so ``D = M - 2 Tr[J x]``.
    """
    Jsup = jump_superoperator(spec, L.jumps)
    r = vec(rho)
    I = _trace(Jsup @ r)
    M = dynamical_activity(spec, L.jumps, rho)
    y = Jsup @ r - I * r
    x = solve_traceless(L.matrix, y, rho)
    D = M - 2.0 * _trace(Jsup @ x)
    return _report(I, M, D, "drazin")


def spectral_gap(L: Liouvillian | np.ndarray, zero_tol: float = 1e-9) -> float:
    """Smallest decay rate ``|Re lambda|`` among the nonzero eigenvalues."""
    mat = L.matrix if isinstance(L, Liouvillian) else L
    ev = la.eigvals(mat)
    scale = max(np.max(np.abs(ev)), 1.0)
    rates = -np.real(ev)
    rates = rates[np.abs(ev) > zero_tol * scale]
    return float(np.min(rates)) if len(rates) else 0.0


def noise_quadrature(
    spec: CountingSpec,
    L: Liouvillian,
    rho: np.ndarray,
    t_max: float | None = None,
    rtol: float = 1e-9,
) -> NoiseReport:
    """Noise by adaptive quadrature of the time-domain correlation.

    The propagator is ``expm(L t)``; the horizon defaults to 40 / gap and is
    split geometrically so each piece is resolved on its own time scale.
    """
    Jsup = jump_superoperator(spec, L.jumps)
    r = vec(rho)
    I = _trace(Jsup @ r)
    M = dynamical_activity(spec, L.jumps, rho)
    if not np.any(Jsup) or M == 0.0:
        # no counted jump ever fires: every cumulant vanishes identically
        return _report(I, M, 0.0, "quadrature")
    gap = spectral_gap(L)
    if gap < 1e-10:
        raise SlowMixingError(f"spectral gap {gap:.3e} too small for quadrature")
    if t_max is None:
        t_max = 40.0 / gap
    # e^{Lt} rho = rho, so subtracting I rho first removes the I^2 cancellation
    y = Jsup @ r - I * r
    left = trace_functional() @ Jsup

    def integrand(t):
        return float(np.real(left @ (la.expm(L.matrix * t) @ y)))

    fastest = max(np.max(np.abs(np.diag(L.matrix))), gap)
    edges = [0.0]
    t = 1.0 / fastest
    while t < t_max:
        edges.append(t)
        t *= 4.0
    edges.append(t_max)
    scale = max(M, I * I)
    # integral magnitude is at most ~ M / gap; the floor only matters when it vanishes
    epsabs = 1e-3 * rtol * scale / gap / len(edges)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        floor = 100 * np.finfo(float).eps * scale * (b - a)
        val, _ = si.quad(integrand, a, b, epsabs=max(epsabs, floor), epsrel=rtol, limit=200)
        total += val
    tail = abs(integrand(t_max)) / gap
    return _report(I, M, M + 2.0 * total, "quadrature", tail)
