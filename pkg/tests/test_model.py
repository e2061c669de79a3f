import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from photodevice.errors import DomainError, InvalidParameterError
from photodevice.model import (
    DeviceParams,
    bose_einstein,
    build_baths,
    build_system,
    fermi_dirac,
    fermi_dirac_hole,
)


def test_fermi_symmetry_point():
    assert fermi_dirac(0.0, 39.2, 0.0) == 0.5


def test_fermi_deep_below_saturates():
    assert fermi_dirac(-1.0, 39.2, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_fermi_far_above_matches_extended_precision():
    # 1 / (exp(78.4) + 1) evaluated with mpmath at 40 digits
    assert fermi_dirac(2.0, 39.2, 0.0) == pytest.approx(8.939487445212864e-35, rel=1e-13)


def test_fermi_clamps_beyond_700():
    assert fermi_dirac(100.0, 39.2, 0.0) == 0.0
    assert fermi_dirac(-100.0, 39.2, 0.0) == 1.0


def test_fermi_rejects_nonfinite():
    with pytest.raises(InvalidParameterError):
        fermi_dirac(float("nan"), 39.2, 0.0)
    with pytest.raises(InvalidParameterError):
        fermi_dirac(0.0, float("inf"), 0.0)


@given(st.floats(-5, 5), st.floats(0.1, 100), st.floats(-2, 2))
def test_fermi_particle_hole_symmetry(x, beta, mu):
    assert fermi_dirac(x, beta, mu) + fermi_dirac(2 * mu - x, beta, mu) == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-5, 5), st.floats(0.1, 100), st.floats(-2, 2))
def test_fermi_hole_is_complement(x, beta, mu):
    assert fermi_dirac_hole(x, beta, mu) == pytest.approx(1.0 - fermi_dirac(x, beta, mu), abs=1e-15)


def test_bose_closed_form():
    # 1 / (e^6 - 1) from mpmath
    assert bose_einstein(3.0, 2.0) == pytest.approx(2.484911656844585e-3, rel=1e-14)


def test_bose_large_argument_vanishes():
    assert bose_einstein(1e4, 2.0) == 0.0


def test_bose_classical_limit():
    b = 1e-6
    assert bose_einstein(3.0, b) * b * 3.0 == pytest.approx(1.0, rel=1e-5)


def test_bose_domain():
    with pytest.raises(DomainError):
        bose_einstein(0.0, 2.0)
    with pytest.raises(DomainError):
        bose_einstein(-1.0, 2.0)


@given(st.floats(0.01, 10), st.floats(0.01, 10))
def test_bose_detailed_balance(x, b):
    n = bose_einstein(x, b)
    assert n / (1 + n) == pytest.approx(math.exp(-b * x), rel=1e-12)


def test_default_params():
    p = DeviceParams()
    assert (p.beta, p.beta_gamma, p.mu, p.eps_H, p.eps_L, p.Gamma) == (39.2, 2.0, 0.0, -1.0, 2.0, 1.0)
    assert p.eta_C == pytest.approx(0.9489795918367347, rel=1e-15)


@pytest.mark.parametrize(
    "bad",
    [dict(z=1.5), dict(z=-0.1), dict(V=-1), dict(Gamma=0), dict(nu=-1), dict(U=-0.1),
     dict(eps_L=-2.0), dict(beta=1.0, beta_gamma=2.0), dict(beta_gamma=0.0), dict(U=float("nan"))],
)
def test_param_validation(bad):
    with pytest.raises(InvalidParameterError):
        DeviceParams(**bad)


def test_mu_outside_levels_only_warns():
    with pytest.warns(UserWarning):
        DeviceParams(mu=3.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        DeviceParams(mu=0.5)


def test_build_system_energies():
    assert build_system(DeviceParams(U=0.0)).energies == (0.0, -1.0, 2.0, 1.0)
    assert build_system(DeviceParams(U=1.0)).energies[3] == 2.0
    assert build_system(DeviceParams(U=0.3)).particle_numbers == (0, 1, 1, 2)


@given(st.floats(-3, 0), st.floats(0.1, 3), st.floats(0, 3))
def test_bohr_frequencies_from_energies(eH, dgap, U):
    s = build_system(DeviceParams(eps_H=eH, eps_L=eH + dgap, U=U, mu=eH))
    E = s.energies
    from_energies = [E[1] - E[0], E[3] - E[2], E[2] - E[0], E[3] - E[1], E[2] - E[1]]
    assert s.bohr_frequencies == pytest.approx(from_energies, abs=1e-12)


def test_baths_bias_split_and_couplings():
    p = DeviceParams(V=1.0, z=0.25, Gamma=2.0, mu=0.1)
    l, r, g = build_baths(p)
    assert (l.mu, r.mu) == pytest.approx((-0.4, 0.6))
    assert (l.gamma_H, l.gamma_L, r.gamma_H, r.gamma_L) == (2.0, 0.5, 0.5, 2.0)
    assert g.id == "gamma" and g.beta == p.beta_gamma and g.nu == p.nu
    assert build_baths(p, V=-1.0)[0].mu == pytest.approx(0.6)
