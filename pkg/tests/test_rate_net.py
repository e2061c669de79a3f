import numpy as np
import pytest
from hypothesis import given

from conftest import device_params
from photodevice.errors import AbsorbingStateError, NonUniqueSteadyStateError
from photodevice.liouvillian import JumpOperator, build_jump_operators
from photodevice.model import DeviceParams, build_baths, build_system, fermi_dirac
from photodevice.rate_net import (
    build_rate_matrix,
    check_conservation_laws,
    gillespie_sample,
    probability_currents,
    rate_matrices,
    rate_steady_state,
    total_rate_matrix,
)


def _net(p):
    system = build_system(p)
    jumps = build_jump_operators(system, build_baths(p))
    mats = rate_matrices(jumps)
    return system, jumps, mats, rate_steady_state(total_rate_matrix(mats))


def test_photon_rate_matrix_shape():
    _, jumps, mats, _ = _net(DeviceParams(nu=10.0))
    R = mats["gamma"].R
    assert np.all(R[0, :] == 0) and np.all(R[:, 0] == 0) and np.all(R[3, :] == 0) and np.all(R[:, 3] == 0)
    assert R[2, 1] > 0 and R[1, 2] > R[2, 1]


@given(device_params())
def test_columns_sum_to_zero(p):
    _, _, mats, _ = _net(p)
    for m in mats.values():
        off = m.R - np.diag(np.diag(m.R))
        assert np.all(off >= 0)
        assert np.all(np.abs(m.R.sum(axis=0)) <= 1e-15 * np.max(np.abs(m.R), initial=1.0))


def test_rate_entry_homo_filling():
    _, jumps, _, _ = _net(DeviceParams())
    assert build_rate_matrix(jumps, "l").R[1, 0] == pytest.approx(fermi_dirac(-1.0, 39.2, 0.0))


def test_equilibrium_gibbs_populations():
    p = DeviceParams(U=0.5, V=0.0, nu=0.0)
    system, _, _, pop = _net(p)
    E, N = np.array(system.energies), np.array(system.particle_numbers)
    g = np.exp(-p.beta * (E - p.mu * N))
    # full relative accuracy, including the e^-39 and e^-78 populations
    assert np.allclose(pop, g / g.sum(), rtol=1e-13, atol=0)


def test_strictly_positive_when_irreducible():
    *_, pop = _net(DeviceParams(z=1, U=1, nu=100, V=1))
    assert np.all(pop > 0) and pop.sum() == pytest.approx(1.0, abs=1e-15)


def test_null_vector_residual():
    _, _, mats, pop = _net(DeviceParams(z=0.3, U=0.8, nu=40, V=1.2))
    R = total_rate_matrix(mats)
    assert np.max(np.abs(R @ pop)) < 1e-12 * np.max(np.abs(R))


def test_gth_against_svd_null_vector():
    rng = np.random.default_rng(7)
    for _ in range(20):
        R = rng.uniform(0, 5, size=(4, 4))
        np.fill_diagonal(R, 0)
        R -= np.diag(R.sum(axis=0))
        v = np.linalg.svd(R)[2][-1]
        v = v / v.sum()
        assert np.allclose(rate_steady_state(R), v, atol=1e-13)


def test_reducible_chain_raises():
    R = np.zeros((4, 4))
    R[1, 0] = R[0, 1] = 1.0
    R[3, 2] = R[2, 3] = 1.0
    R -= np.diag(R.sum(axis=0))
    with pytest.raises(NonUniqueSteadyStateError) as info:
        rate_steady_state(R)
    assert info.value.kernel_dim == 2


def test_transient_states_get_zero_weight():
    R = np.zeros((4, 4))
    R[1, 0] = R[1, 2] = R[1, 3] = 1.0
    R -= np.diag(R.sum(axis=0))
    assert np.array_equal(rate_steady_state(R), [0.0, 1.0, 0.0, 0.0])


def test_currents_vanish_at_equilibrium():
    _, _, mats, pop = _net(DeviceParams(U=0.3, V=0.0, nu=0.0))
    cur = probability_currents(mats, pop)
    for j in cur.j.values():
        assert np.max(np.abs(j)) < 1e-15


@given(device_params())
def test_current_antisymmetry_and_conservation(p):
    _, _, mats, pop = _net(p)
    cur = probability_currents(mats, pop)
    for j in cur.j.values():
        assert np.array_equal(j, -j.T)
    assert np.max(np.abs(check_conservation_laws(cur))) < 1e-12


def test_photon_probability_current_formula():
    p = DeviceParams(z=0.5, U=0.5, nu=20, V=1)
    system, jumps, mats, pop = _net(p)
    from photodevice.model import bose_einstein
    n = bose_einstein(3.0, 2.0)
    cur = probability_currents(mats, pop)
    assert cur["gamma", 2, 1] == pytest.approx(p.nu * (n * pop[1] - (1 + n) * pop[2]), rel=1e-12)


def test_conservation_residuals_off_steady_state():
    _, _, mats, _ = _net(DeviceParams(z=0.5, nu=10, V=1))
    q = np.array([0.4, 0.3, 0.2, 0.1])
    res = check_conservation_laws(probability_currents(mats, q))
    assert np.allclose(res, total_rate_matrix(mats) @ q, atol=1e-15)
    assert np.max(np.abs(res)) > 1e-3


def test_asymmetric_current_equals_photon_current():
    _, _, mats, pop = _net(DeviceParams(z=0.0, U=1.0, nu=50, V=1))
    cur = probability_currents(mats, pop)
    JlN = cur["l", 1, 0] + cur["l", 3, 2]
    assert JlN == pytest.approx(cur["gamma", 2, 1], rel=1e-12)


def test_gillespie_zero_weights():
    _, jumps, _, _ = _net(DeviceParams(z=1, U=1, nu=10, V=1))
    g = gillespie_sample(jumps, {}, n_jumps=1e4, seed=3)
    assert g.mean_rate == 0 and g.variance_rate == 0


def test_gillespie_reproducible():
    _, jumps, _, _ = _net(DeviceParams(z=1, U=1, nu=10, V=1))
    w = {"l:10": 1, "l:01": -1}
    a = gillespie_sample(jumps, w, n_jumps=1e5, seed=11)
    b = gillespie_sample(jumps, w, n_jumps=1e5, seed=11)
    c = gillespie_sample(jumps, w, n_jumps=1e5, seed=12)
    assert a == b and a != c


def test_gillespie_two_state_poisson():
    # 1 <-> 2 telegraph process counting only 1 -> 2 jumps
    jumps = [JumpOperator("gamma", 2, 1, 2.0), JumpOperator("gamma", 1, 2, 3.0)]
    g = gillespie_sample(jumps, {"gamma:21": 1}, n_jumps=2e6, n_batches=200, seed=0,
                         initial=np.array([0, 0.6, 0.4, 0]))
    a, b = 2.0, 3.0
    mean = a * b / (a + b)
    var = mean * (1 - 2 * a * b / (a + b) ** 2)  # Fano factor of a renewal chain
    assert abs(g.mean_rate - mean) < 3 * g.mean_stderr
    assert abs(g.variance_rate - var) < 3 * g.variance_stderr


def test_gillespie_absorbing_state():
    jumps = [JumpOperator("gamma", 2, 1, 1.0)]
    with pytest.raises(AbsorbingStateError):
        gillespie_sample(jumps, {}, initial=np.array([0, 0.5, 0.5, 0]), n_jumps=10)


def test_gillespie_needs_batches():
    with pytest.raises(ValueError):
        gillespie_sample([], {}, n_batches=10)
