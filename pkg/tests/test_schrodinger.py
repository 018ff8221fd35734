import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpstrichartz import schrodinger as sch

LINE = np.linspace(-20, 20, 161)
coeff = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


def test_sharp_constants():
    assert sch.sharp_constant(4, 2) == pytest.approx(2 ** -0.5, rel=1e-15)
    assert sch.sharp_constant(6, 1) == pytest.approx(12 ** (-1 / 12), rel=1e-15)


@pytest.mark.parametrize("pqd", [(4, 4, 2), (6, 6, 1), (4, 8, 1), (10 / 3, 10 / 3, 3)])
def test_admissible(pqd):
    sch.check_admissible(*pqd)


@pytest.mark.parametrize("pqd", [(4, 4, 1), (6, 6, 2), (1, 4, 2)])
def test_not_admissible(pqd):
    with pytest.raises(sch.AdmissibilityError):
        sch.check_admissible(*pqd)


def test_basis_validation():
    with pytest.raises(ValueError):
        sch.ModeExpansion("fourier", 1, {})
    with pytest.raises(ValueError):
        sch.ModeExpansion("hermite-phi", 2, {(1,): 1.0})
    with pytest.raises(ValueError):
        sch.ModeExpansion("laguerre-psi", 2, {-1: 1.0})


@given(st.integers(0, 6), st.floats(-2, 2))
def test_flow_starts_at_data(m, x):
    assert sch.evolve_phi((m,), 0.0, x)[()] == pytest.approx(sch.phi_mode((m,), x)[()], abs=1e-12)


def test_gaussian_mode_is_the_gaussian_flow():
    x = np.stack([LINE, 0.5 * LINE], axis=-1)
    for t in (0.05, -0.4, 2.0):
        assert np.allclose(sch.evolve_phi((0, 0), t, x), sch.evolve_gaussian(1.0, t, x, 2), atol=1e-14)
        assert np.allclose(sch.evolve_psi(0, t, x, 2), sch.evolve_gaussian(1.0, t, x, 2), atol=1e-14)


@pytest.mark.parametrize("m", [0, 1, 4])
@pytest.mark.parametrize("t", [0.3, -1.5])
def test_flow_preserves_mass(m, t):
    x = np.linspace(-80, 80, 16001)
    u = sch.evolve_phi((m,), t, x)
    mass = np.sum(np.abs(u) ** 2) * (x[1] - x[0])
    f = sch.ModeExpansion("hermite-phi", 1, {(m,): 1.0})
    assert mass == pytest.approx(f.l2_norm_sq(), rel=1e-8)


def test_laguerre_norms_from_samples():
    f = sch.ModeExpansion("laguerre-psi", 2, {0: 1.0, 3: 0.5j})
    prof = sch.SampledProfile.on_radius(lambda r: f.evolve(0.0, np.stack([r, 0 * r], -1)), 2, extent=8, panels=40)
    assert prof.mass() == pytest.approx(f.l2_norm_sq(), rel=1e-12)


@pytest.mark.parametrize("m,t", [(0, 0.1), (3, 1.0)])
def test_numeric_propagator_line(m, t):
    f = sch.SampledProfile.on_line(lambda x: sch.phi_mode((m,), x))
    u = sch.numeric_propagate(f, t, LINE)
    assert np.max(np.abs(u.values - sch.evolve_phi((m,), t, LINE))) < 1e-8


def test_numeric_propagator_radial():
    r = np.linspace(0, 10, 41)
    f = sch.SampledProfile.on_radius(lambda s: sch.psi_mode(2, s, 2), 2)
    u = sch.numeric_propagate(f, 0.5, r)
    assert np.max(np.abs(u.values - sch.evolve_psi_radial(2, 0.5, r, 2))) < 1e-8


def test_propagator_refuses_short_grid():
    f = sch.SampledProfile.on_line(lambda x: sch.phi_mode((0,), x), extent=4)
    with pytest.raises(sch.GridResolutionError):
        sch.numeric_propagate(f, 5.0)


def test_gaussian_quotients_are_sharp():
    psi0 = sch.ModeExpansion("laguerre-psi", 2, {0: 1.0})
    phi0 = sch.ModeExpansion("hermite-phi", 1, {(0,): 1.0})
    assert sch.spacetime_norm_numeric(psi0, 4, 4) / math.sqrt(psi0.l2_norm_sq()) == pytest.approx(2 ** -0.5, rel=1e-12)
    assert sch.spacetime_norm_numeric(phi0, 6, 6) / math.sqrt(phi0.l2_norm_sq()) == pytest.approx(12 ** (-1 / 12), rel=1e-12)


def test_bases_agree_on_the_gaussian():
    psi0 = sch.ModeExpansion("laguerre-psi", 2, {0: 1.0})
    phi0 = sch.ModeExpansion("hermite-phi", 2, {(0, 0): 1.0})
    assert sch.spacetime_norm_numeric(psi0, 4, 4) == pytest.approx(sch.spacetime_norm_numeric(phi0, 4, 4), rel=1e-12)


@given(st.floats(0.2, 5), st.floats(-3, 3))
def test_maximizer_family(b_re, b_im):
    q = sch.gaussian_quotient(complex(b_re, b_im), 4, 4, 2)
    assert q == pytest.approx(2 ** -0.5, rel=1e-8)


@given(st.dictionaries(st.integers(0, 4), coeff, min_size=1, max_size=3))
def test_radial_quotient_never_exceeds_sharp_constant(terms):
    f = sch.ModeExpansion("laguerre-psi", 2, terms)
    if f.l2_norm_sq() < 1e-6:
        return
    ratio = sch.spacetime_norm_numeric(f, 4, 4) / math.sqrt(f.l2_norm_sq())
    assert ratio <= 2 ** -0.5 * (1 + 1e-10)


@given(st.dictionaries(st.tuples(st.integers(0, 3)), coeff, min_size=1, max_size=3))
def test_equivalence_line(terms):
    g = sch.ModeExpansion("hermite-h", 1, terms)
    lhs, rhs, ratio = sch.equivalence_check_hermite(g, 6, 6, 1)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-300)


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeff, min_size=1, max_size=4))
def test_parseval_plane(terms):
    f = sch.ModeExpansion("hermite-phi", 2, terms)
    lhs, rhs = sch.parseval_check(f)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-14)


def test_grid_validation():
    with pytest.raises(sch.GridResolutionError):
        sch.SpaceTimeGrid(time_nodes=0)
