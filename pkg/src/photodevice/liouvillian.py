"""Global Lindblad generator for the four-state photodevice.

Density matrices are vectorized column-major (``rho.reshape(-1, order="F")``),
so ``vec(A X B) = kron(B.T, A) @ vec(X)``. Basis states carry the standard
positive phase; all generators map populations to populations, so the sign
convention of |2> is immaterial.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as la

from .errors import ConfigurationError, NonUniqueSteadyStateError
from .model import (
    BathSpec,
    SystemSpec,
    bose_einstein,
    fermi_dirac,
    fermi_dirac_hole,
)

DIM = 4
SUPER_DIM = DIM * DIM

# (to, from) transitions per fermionic bath, grouped as (in, out) pairs:
# HOMO filling from empty, HOMO filling with LUMO occupied,
# LUMO filling from empty, LUMO filling with HOMO occupied.
FERMIONIC_TRANSITIONS = ((1, 0), (0, 1), (3, 2), (2, 3), (2, 0), (0, 2), (3, 1), (1, 3))
PHOTON_TRANSITIONS = ((2, 1), (1, 2))

# vec index of the population |m><m|
POP_INDEX = np.arange(DIM) * (DIM + 1)


@dataclass(frozen=True)
class JumpOperator:
    """Lindblad channel ``sqrt(rate) |to><from|`` owned by one bath."""

    bath: str
    to_level: int
    from_level: int
    rate: float

    def __post_init__(self):
        if not (np.isfinite(self.rate) and self.rate >= 0):
            raise ValueError(f"jump rate must be finite and >= 0, got {self.rate}")
        allowed = PHOTON_TRANSITIONS if self.bath == "gamma" else FERMIONIC_TRANSITIONS
        if (self.to_level, self.from_level) not in allowed:
            raise ValueError(f"transition {self.to_level}<-{self.from_level} not allowed for {self.bath}")

    @property
    def label(self) -> str:
        return f"{self.bath}:{self.to_level}{self.from_level}"

    @property
    def matrix(self) -> np.ndarray:
        op = np.zeros((DIM, DIM), dtype=complex)
        op[self.to_level, self.from_level] = np.sqrt(self.rate)
        return op


def build_jump_operators(system: SystemSpec, baths: list[BathSpec]) -> list[JumpOperator]:
    """Eight channels per lead plus absorption/emission for the photon bath."""
    _, eH, eL, _ = system.energies
    # E_3 - E_2 = eps_H + U and E_3 - E_1 = eps_L + U
    eHU = system.energies[3] - system.energies[2]
    eLU = system.energies[3] - system.energies[1]
    jumps = []
    for bath in baths:
        if bath.id in ("l", "r"):
            b, mu = bath.beta, bath.mu
            rates = (
                bath.gamma_H * fermi_dirac(eH, b, mu),
                bath.gamma_H * fermi_dirac_hole(eH, b, mu),
                bath.gamma_H * fermi_dirac(eHU, b, mu),
                bath.gamma_H * fermi_dirac_hole(eHU, b, mu),
                bath.gamma_L * fermi_dirac(eL, b, mu),
                bath.gamma_L * fermi_dirac_hole(eL, b, mu),
                bath.gamma_L * fermi_dirac(eLU, b, mu),
                bath.gamma_L * fermi_dirac_hole(eLU, b, mu),
            )
            transitions = FERMIONIC_TRANSITIONS
        elif bath.id == "gamma":
            n = bose_einstein(eL - eH, bath.beta)
            rates = (bath.nu * n, bath.nu * (1.0 + n))
            transitions = PHOTON_TRANSITIONS
        else:
            raise ConfigurationError(f"unknown bath id {bath.id!r}")
        for (to, frm), rate in zip(transitions, rates):
            jumps.append(JumpOperator(bath.id, to, frm, float(rate)))
    return jumps


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def sandwich(op: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> op X op^dagger``."""
    return np.kron(op.conj(), op)


def dissipator(jumps: list[JumpOperator]) -> np.ndarray:
    eye = np.eye(DIM)
    out = np.zeros((SUPER_DIM, SUPER_DIM), dtype=complex)
    for jump in jumps:
        op = jump.matrix
        ldl = op.conj().T @ op
        out += sandwich(op) - 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye))
    return out


def commutator_part(hamiltonian: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> -i [H, X]``."""
    eye = np.eye(DIM)
    return -1j * (np.kron(eye, hamiltonian) - np.kron(hamiltonian.T, eye))


@dataclass(frozen=True)
class Liouvillian:
    """Full generator plus its per-bath dissipators (all 16x16)."""

    matrix: np.ndarray
    dissipators: dict[str, np.ndarray]
    jumps: list[JumpOperator] = field(default_factory=list)
    system: SystemSpec | None = None

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.matrix @ vec(rho))

    def apply_dissipator(self, bath: str, rho: np.ndarray) -> np.ndarray:
        return unvec(self.dissipators[bath] @ vec(rho))


def build_liouvillian(system: SystemSpec, jumps: list[JumpOperator]) -> Liouvillian:
    baths = sorted({j.bath for j in jumps}, key=["l", "r", "gamma"].index)
    dissipators = {b: dissipator([j for j in jumps if j.bath == b]) for b in baths}
    total = commutator_part(system.hamiltonian) + sum(dissipators.values(), np.zeros((SUPER_DIM, SUPER_DIM)))
    return Liouvillian(total, dissipators, list(jumps), system)


def trace_functional() -> np.ndarray:
    row = np.zeros(SUPER_DIM)
    row[POP_INDEX] = 1.0
    return row


@dataclass(frozen=True)
class SteadyState:
    rho: np.ndarray
    residual: float
    trace_error: float
    min_eigenvalue: float
    kernel_dim: int = 1

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho)).copy()


def kernel_dimension(L: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Number of singular values below ``rel_tol * sigma_max``."""
    s = la.svdvals(L)
    return int(np.sum(s <= rel_tol * s[0]))


def certify(L: np.ndarray, rho: np.ndarray, kernel_dim: int = 1) -> SteadyState:
    norm = la.norm(L, 2)
    residual = la.norm(L @ vec(rho)) / (norm if norm > 0 else 1.0)
    herm = 0.5 * (rho + rho.conj().T)
    return SteadyState(
        rho=rho,
        residual=float(residual),
        trace_error=float(abs(np.trace(rho) - 1.0)),
        min_eigenvalue=float(np.min(la.eigvalsh(herm))),
        kernel_dim=kernel_dim,
    )


def steady_state(L: Liouvillian | np.ndarray, rel_tol: float = 1e-8) -> SteadyState:
    """Unique fixed point of ``L`` from the trace-bordered linear system.

    One row of ``L`` is replaced by the trace functional and the system is
    solved by LU with partial pivoting. Kernel uniqueness is checked on the
    singular values first.
    """
    mat = L.matrix if isinstance(L, Liouvillian) else np.asarray(L)
    kdim = kernel_dimension(mat, rel_tol)
    if kdim != 1:
        raise NonUniqueSteadyStateError(kdim)
    A = mat.copy()
    A[0, :] = trace_functional()
    b = np.zeros(SUPER_DIM, dtype=complex)
    b[0] = 1.0
    rho = unvec(la.lu_solve(la.lu_factor(A), b))
    rho = 0.5 * (rho + rho.conj().T)
    return certify(mat, rho, kdim)


def solve_traceless(L: np.ndarray, y: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Group-inverse action: the ``x`` with ``L x = y`` and ``Tr x = 0``.

    ``y`` must be traceless. Uses the bordered matrix ``[[L, vec rho], [tr, 0]]``,
    nonsingular exactly when the kernel of ``L`` is spanned by ``rho``.
    """
    n = L.shape[0]
    B = np.zeros((n + 1, n + 1), dtype=complex)
    B[:n, :n] = L
    B[:n, n] = vec(rho)
    B[n, :n] = trace_functional()
    rhs = np.zeros(n + 1, dtype=complex)
    rhs[:n] = y
    try:
        sol = la.solve(B, rhs)
    except la.LinAlgError as exc:
        raise NonUniqueSteadyStateError(kernel_dimension(L), "bordered system singular") from exc
    return sol[:n]
