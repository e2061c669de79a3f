"""Steady-state currents, first/second law, performance and conductance.

Sign convention: every current is positive when it flows *into* the system
from the named bath; ``J`` denotes the particle current from lead ``l``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .device import DeviceSolution, solve_device
from .errors import DomainError, UndefinedPerformanceError
from .liouvillian import vec, unvec
from .model import BathSpec, DeviceParams, SystemSpec
from .rate_net import ProbabilityCurrents, probability_currents

JQ_GAMMA_FLOOR = 1e-14
REGIME_TOL = 1e-12
EIG_CLIP = 1e-300

SOLAR_CELL = "solar_cell"
PHOTOCONDUCTOR = "photoconductor"
EQUILIBRIUM = "equilibrium"


def _apply(D: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return unvec(D @ vec(rho))


def particle_current(bath: BathSpec, rho: np.ndarray, D_bath: np.ndarray, system: SystemSpec) -> float:
    """``Tr[N D_bath[rho]]`` for a lead."""
    if bath.id == "gamma":
        raise DomainError("the photon bath exchanges no particles")
    return float(np.real(np.trace(system.number_operator @ _apply(D_bath, rho))))


def heat_current(bath: BathSpec, rho: np.ndarray, D_bath: np.ndarray, system: SystemSpec) -> float:
    """``Tr[(H - mu N) D_bath[rho]]``; the photon bath has zero chemical potential."""
    mu = 0.0 if bath.id == "gamma" else bath.mu
    op = system.hamiltonian - mu * system.number_operator
    return float(np.real(np.trace(op @ _apply(D_bath, rho))))


def particle_current_rate(currents: ProbabilityCurrents, bath: str) -> float:
    j = currents.j[bath]
    return float(j[1, 0] + j[2, 0] + j[3, 1] + j[3, 2])


def photon_heat_current_rate(currents: ProbabilityCurrents, system: SystemSpec) -> float:
    _, eH, eL, _ = system.energies
    return float((eL - eH) * currents.j["gamma"][2, 1])


def entropy_production_currents(heat_currents: dict[str, float], betas: dict[str, float]) -> float:
    """``-sum_a beta_a JQ_a``."""
    return float(-sum(betas[b] * heat_currents[b] for b in heat_currents))


def _logm_psd(rho: np.ndarray) -> tuple[np.ndarray, bool]:
    w, U = la.eigh(0.5 * (rho + rho.conj().T))
    clipped = bool(np.any(w < EIG_CLIP))
    w = np.maximum(w, EIG_CLIP)
    return (U * np.log(w)) @ U.conj().T, clipped


def reference_state_log(bath: BathSpec, system: SystemSpec) -> np.ndarray:
    """``log omega`` for the bath's invariant reference state.

    Leads: grand canonical state of ``H - mu N``. Photons: thermal state of the
    Hamiltonian projected on the single-particle sector (levels 1, 2).
    """
    E = np.asarray(system.energies)
    N = np.asarray(system.particle_numbers)
    if bath.id == "gamma":
        proj = np.array([0.0, 1.0, 1.0, 0.0])
        x = -bath.beta * E * proj
    else:
        x = -bath.beta * (E - bath.mu * N)
    log_z = np.logaddexp.reduce(x)
    return np.diag(x - log_z).astype(complex)


@dataclass(frozen=True)
class SpohnResult:
    total: float
    per_bath: dict[str, float]
    regularized: bool


def entropy_production_spohn(
    rho: np.ndarray, baths: list[BathSpec], system: SystemSpec, dissipators: dict[str, np.ndarray]
) -> SpohnResult:
    """``-sum_a Tr[D_a[rho] (log rho - log omega_a)]`` with per-bath terms.

    Eigenvalues of ``rho`` below 1e-300 are clipped before the logarithm;
    ``regularized`` records whether that happened.
    """
    log_rho, clipped = _logm_psd(rho)
    terms = {}
    for bath in baths:
        d_rho = _apply(dissipators[bath.id], rho)
        diff = log_rho - reference_state_log(bath, system)
        terms[bath.id] = float(-np.real(np.trace(d_rho @ diff)))
    return SpohnResult(sum(terms.values()), terms, clipped)


def rate_current_split(currents: ProbabilityCurrents) -> tuple[float, float, float]:
    """(j^r_H, j^l_L, j^gamma_21): current into HOMO from r, into LUMO from l, photon absorption."""
    jr, jl, jg = currents.j["r"], currents.j["l"], currents.j["gamma"]
    return float(jr[1, 0] + jr[3, 2]), float(jl[2, 0] + jl[3, 1]), float(jg[2, 1])


def coefficient_of_performance(
    J: float,
    JQ_gamma: float,
    V: float,
    currents: ProbabilityCurrents | None = None,
    optical_gap: float | None = None,
    rtol: float = 1e-10,
) -> float:
    """``Q = V J / JQ_gamma``.

    With ``currents`` and ``optical_gap`` the rate-form decomposition
    ``V/gap * (1 - (j^r_H - j^l_L) / j^gamma_21)`` is checked too. Both forms
    share the denominator, so the check is on the numerator identity
    ``J = j^gamma_21 - (j^r_H - j^l_L)``, relative to its largest term; comparing
    Q itself would be ill-conditioned where JQ_gamma nearly vanishes.
    """
    if abs(JQ_gamma) < JQ_GAMMA_FLOOR:
        raise UndefinedPerformanceError(f"|JQ_gamma| = {abs(JQ_gamma):.3e} below {JQ_GAMMA_FLOOR}")
    Q = V * J / JQ_gamma
    if currents is not None and optical_gap is not None:
        jrH, jlL, jg = rate_current_split(currents)
        scale = max(abs(J), abs(jg), abs(jrH), abs(jlL), 1e-300)
        if abs(J - (jg - jrH + jlL)) > rtol * scale:
            Q_rate = V / optical_gap * (1.0 - (jrH - jlL) / jg)
            raise ArithmeticError(f"performance forms disagree: {Q!r} vs {Q_rate!r}")
    return Q


def solar_cell_condition(currents: ProbabilityCurrents) -> bool:
    """``j^gamma_21 > j^r_H - j^l_L``."""
    jrH, jlL, jg = rate_current_split(currents)
    return jg > jrH - jlL


def classify_regime(J: float, Q: float | None, JQ_gamma: float, tol: float = REGIME_TOL) -> str:
    """Solar cell for ``Q > tol``, photoconductor for ``Q < -tol``.

    When ``Q`` is undefined (vanishing photon heat current) the sign of ``J``
    decides, and a vanishing ``J`` counts as equilibrium.
    """
    if Q is None:
        if abs(J) <= tol:
            return EQUILIBRIUM
        return SOLAR_CELL if J > 0 else PHOTOCONDUCTOR
    if Q > tol:
        return SOLAR_CELL
    if Q < -tol:
        return PHOTOCONDUCTOR
    return EQUILIBRIUM


@dataclass(frozen=True)
class ThermoReport:
    J: float
    J_r: float
    JQ_l: float
    JQ_r: float
    JQ_gamma: float
    sigma_dot: float
    Q: float | None
    eta_C: float
    regime: str
    solar_cell_condition: bool
    first_law_residual: float
    currents: ProbabilityCurrents

    @property
    def heat_currents(self) -> dict[str, float]:
        return {"l": self.JQ_l, "r": self.JQ_r, "gamma": self.JQ_gamma}


def thermo_from_solution(sol: DeviceSolution) -> ThermoReport:
    rho, system = sol.rho, sol.system
    D = sol.liouvillian.dissipators
    bl, br, bg = sol.bath("l"), sol.bath("r"), sol.bath("gamma")
    J = particle_current(bl, rho, D["l"], system)
    J_r = particle_current(br, rho, D["r"], system)
    JQ = {b.id: heat_current(b, rho, D[b.id], system) for b in (bl, br, bg)}
    betas = {b.id: b.beta for b in (bl, br, bg)}
    sigma = entropy_production_currents(JQ, betas)
    currents = probability_currents(sol.rates, sol.populations)
    bias = br.mu - bl.mu
    gap = system.energies[2] - system.energies[1]
    try:
        Q = coefficient_of_performance(J, JQ["gamma"], bias, currents, gap)
    except UndefinedPerformanceError:
        Q = None
    first_law = bias * J - sum(JQ.values())
    return ThermoReport(
        J=J,
        J_r=J_r,
        JQ_l=JQ["l"],
        JQ_r=JQ["r"],
        JQ_gamma=JQ["gamma"],
        sigma_dot=sigma,
        Q=Q,
        eta_C=sol.params.eta_C,
        regime=classify_regime(J, Q, JQ["gamma"]),
        solar_cell_condition=solar_cell_condition(currents),
        first_law_residual=float(first_law),
        currents=currents,
    )


def thermo_report(params: DeviceParams) -> ThermoReport:
    return thermo_from_solution(solve_device(params))


def current_at_bias(params: DeviceParams, V: float) -> float:
    sol = solve_device(params, V)
    return particle_current(sol.bath("l"), sol.rho, sol.liouvillian.dissipators["l"], sol.system)


def conductance(params: DeviceParams, h: float = 1e-4, rtol: float = 1e-6) -> float:
    """Zero-bias conductance ``dJ/dV`` by central differences.

    The ``V`` field of ``params`` is ignored. The step is compared against
    ``h/2``; disagreement beyond ``rtol`` raises a warning carrying both values.
    """
    def central(step):
        return (current_at_bias(params, step) - current_at_bias(params, -step)) / (2 * step)

    g1, g2 = central(h), central(h / 2)
    if abs(g1 - g2) > rtol * max(abs(g1), abs(g2)):
        warnings.warn(f"conductance step sensitivity: G(h={h:g})={g1!r}, G(h/2)={g2!r}", stacklevel=2)
    return g1
