"""Classical four-state Markov network equivalent to the Lindblad populations.

``R[m, n]`` is the rate n -> m on the off-diagonal; columns sum to zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import AbsorbingStateError, NonUniqueSteadyStateError
from .liouvillian import DIM, JumpOperator

CONSERVATION_NODES = (0, 1, 2, 3)


@dataclass(frozen=True)
class RateMatrix:
    bath: str
    R: np.ndarray


def build_rate_matrix(jumps: list[JumpOperator], bath: str) -> RateMatrix:
    """Assemble the generator of one bath from its channel rates.

    Diagonals are set from the column sums, so stochasticity is exact.
    """
    R = np.zeros((DIM, DIM))
    for j in jumps:
        if j.bath == bath:
            R[j.to_level, j.from_level] += j.rate
    R[np.diag_indices(DIM)] = 0.0
    R[np.diag_indices(DIM)] = -R.sum(axis=0)
    return RateMatrix(bath, R)


def rate_matrices(jumps: list[JumpOperator]) -> dict[str, RateMatrix]:
    baths = sorted({j.bath for j in jumps}, key=["l", "r", "gamma"].index)
    return {b: build_rate_matrix(jumps, b) for b in baths}


def total_rate_matrix(mats: dict[str, RateMatrix]) -> np.ndarray:
    return sum((m.R for m in mats.values()), np.zeros((DIM, DIM)))


def closed_classes(R: np.ndarray) -> list[np.ndarray]:
    """Recurrent communicating classes of the chain with generator ``R``."""
    adj = (R.T > 0).astype(int)  # adj[n, m]: n -> m possible
    np.fill_diagonal(adj, 0)
    n_comp, labels = connected_components(adj, directed=True, connection="strong")
    classes = []
    for c in range(n_comp):
        members = np.flatnonzero(labels == c)
        outside = np.setdiff1d(np.arange(len(R)), members)
        if not adj[np.ix_(members, outside)].any():
            classes.append(members)
    return classes


def _gth(Q: np.ndarray) -> np.ndarray:
    """Grassmann-Taksar-Heyman state reduction for an irreducible chain.

    ``Q[i, j]`` is the rate i -> j. Subtraction-free, so tiny populations
    come out with full relative accuracy.
    """
    A = np.array(Q, dtype=float)
    n = len(A)
    for k in range(n - 1, 0, -1):
        s = A[k, :k].sum()
        A[:k, k] /= s
        A[:k, :k] += np.outer(A[:k, k], A[k, :k])
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        pi[k] = pi[:k] @ A[:k, k]
    return pi / pi.sum()


def rate_steady_state(R_total: np.ndarray) -> np.ndarray:
    """Stationary populations ``p`` with ``R_total @ p = 0`` and ``sum(p) = 1``."""
    R_total = np.asarray(R_total, dtype=float)
    classes = closed_classes(R_total)
    if len(classes) != 1:
        raise NonUniqueSteadyStateError(len(classes), "rate network has several closed classes")
    members = classes[0]
    p = np.zeros(len(R_total))
    if len(members) == 1:
        p[members] = 1.0
        return p
    Q = R_total[np.ix_(members, members)].T.copy()
    np.fill_diagonal(Q, 0.0)
    p[members] = _gth(Q)
    return p


@dataclass(frozen=True)
class ProbabilityCurrents:
    """``j[bath][m, n] = r_mn p_n - r_nm p_m`` (net flow n -> m)."""

    j: dict[str, np.ndarray]

    def __getitem__(self, key):
        bath, m, n = key
        return self.j[bath][m, n]


def probability_currents(mats: dict[str, RateMatrix], p: np.ndarray) -> ProbabilityCurrents:
    out = {}
    for bath, rm in mats.items():
        r = rm.R.copy()
        np.fill_diagonal(r, 0.0)
        flow = r * p[None, :]
        out[bath] = flow - flow.T
    return ProbabilityCurrents(out)


def check_conservation_laws(currents: ProbabilityCurrents) -> np.ndarray:
    """Net inflow into each level summed over all baths (zero at steady state)."""
    return np.array([sum(j[m, :].sum() for j in currents.j.values()) for m in CONSERVATION_NODES])


@dataclass(frozen=True)
class GillespieResult:
    mean_rate: float
    mean_stderr: float
    variance_rate: float
    variance_stderr: float
    horizon: float
    n_batches: int
    n_jumps: int
    seed: int


@numba.njit(cache=True)
def _simulate(out_start, out_rate_cum, out_to, out_weight, exit_rate, state, horizon, n_batches, seed):
    np.random.seed(seed)
    counts = np.zeros(n_batches)
    t_batch = horizon / n_batches
    t = 0.0
    n_jumps = 0
    while True:
        t += np.random.exponential(1.0 / exit_rate[state])
        if t >= horizon:
            break
        u = np.random.random() * exit_rate[state]
        k = out_start[state]
        while k < out_start[state + 1] - 1 and out_rate_cum[k] <= u:
            k += 1
        b = int(t / t_batch)
        if b >= n_batches:
            b = n_batches - 1
        counts[b] += out_weight[k]
        state = out_to[k]
        n_jumps += 1
    return counts, n_jumps


def gillespie_sample(
    jumps: list[JumpOperator],
    weights: dict[str, float],
    horizon: float | None = None,
    n_jumps: float = 1e6,
    n_batches: int = 100,
    seed: int = 0,
    initial: np.ndarray | None = None,
) -> GillespieResult:
    """Mean and variance growth rate of a weighted jump count by exact sampling.

    ``weights`` maps channel labels (e.g. ``"l:10"``) to counting weights. The
    trajectory starts from a state drawn from ``initial`` (stationary
    populations by default) and is cut into ``n_batches`` equal batches;
    batch means give the estimates and their standard errors.
    """
    if n_batches < 50:
        raise ValueError("need at least 50 batches")
    active = [j for j in jumps if j.rate > 0]
    order = sorted(range(len(active)), key=lambda i: (active[i].from_level, i))
    out_start = np.zeros(DIM + 1, dtype=np.int64)
    out_to, out_w, out_r = [], [], []
    exit_rate = np.zeros(DIM)
    for i in order:
        j = active[i]
        out_start[j.from_level + 1] += 1
        out_to.append(j.to_level)
        out_w.append(float(weights.get(j.label, 0.0)))
        out_r.append(j.rate)
        exit_rate[j.from_level] += j.rate
    out_start = np.cumsum(out_start)
    cum = np.zeros(len(out_r))
    for s in range(DIM):
        a, b = out_start[s], out_start[s + 1]
        cum[a:b] = np.cumsum(out_r[a:b])

    R = np.zeros((DIM, DIM))
    for j in active:
        R[j.to_level, j.from_level] += j.rate
    R -= np.diag(R.sum(axis=0))
    p = rate_steady_state(R) if initial is None else np.asarray(initial, dtype=float)
    if np.any((exit_rate == 0) & (p > 0)):
        raise AbsorbingStateError(f"absorbing state(s) {np.flatnonzero(exit_rate == 0).tolist()}")
    if horizon is None:
        horizon = n_jumps / float(p @ exit_rate)

    rng = np.random.default_rng(seed)
    state = int(rng.choice(DIM, p=p / p.sum()))
    counts, jumps_done = _simulate(
        out_start, cum, np.asarray(out_to, dtype=np.int64), np.asarray(out_w),
        exit_rate, state, float(horizon), int(n_batches), int(rng.integers(2**31 - 1)),
    )
    t_b = horizon / n_batches
    mean = counts.mean()
    dev2 = (counts - mean) ** 2
    var = dev2.sum() / (n_batches - 1)
    return GillespieResult(
        mean_rate=mean / t_b,
        mean_stderr=counts.std(ddof=1) / np.sqrt(n_batches) / t_b,
        variance_rate=var / t_b,
        variance_stderr=dev2.std(ddof=1) / np.sqrt(n_batches) / t_b,
        horizon=float(horizon),
        n_batches=int(n_batches),
        n_jumps=int(jumps_done),
        seed=int(seed),
    )
