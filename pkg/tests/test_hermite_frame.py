import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpstrichartz import hermite_frame as hf
from sharpstrichartz.orthopoly import hermite_eval
from sharpstrichartz.quadrature import gauss_rule
from sharpstrichartz.schrodinger import ModeExpansion

P211 = hf.FrameParams(2, 1, 1)


def _p_by_quadrature(m, n, params):
    """∫ Π H_{m_s}(λ x) H_{n_s}(λ x) dγ coordinatewise, with float Gauss–Hermite."""
    rule = gauss_rule("hermite", 40)
    lam = 1 / math.sqrt(params.k)
    out = 1.0
    k, d = params.k, params.d
    for i in range(params.l):
        for c in range(d):
            vals = np.ones_like(rule.nodes)
            for j in range(k):
                s = (i * k + j) * d + c
                vals = vals * hermite_eval(m[s], lam * rule.nodes) * hermite_eval(n[s], lam * rule.nodes)
            out *= float(np.dot(rule.weights, vals))
    return out


def test_small_coefficient():
    assert hf.p_coefficient((1, 1), (1, 1), P211) == Fraction(3, 4)
    assert hf.p_coefficient((1, 0), (0, 0), P211) == 0


@given(st.lists(st.integers(0, 4), min_size=4, max_size=4),
       st.lists(st.integers(0, 4), min_size=4, max_size=4))
def test_coefficient_matches_quadrature(m, n):
    params = hf.FrameParams(2, 1, 2)
    exact = hf.p_coefficient(m, n, params)
    scale = math.sqrt(math.prod(math.factorial(v) for v in m + n))
    assert float(exact) == pytest.approx(_p_by_quadrature(m, n, params), rel=1e-10, abs=1e-12 * scale)


@pytest.mark.parametrize("params", [hf.FrameParams(2, 1, 2, 3), hf.FrameParams(3, 1, 1, 4),
                                    hf.FrameParams(2, 2, 1, 2)])
def test_fast_assembly_matches_reference(params):
    E = hf.assemble_P(params)
    idx = E.indices
    for i in range(E.dim):
        for j in range(E.dim):
            assert E.entry(i, j) == hf.p_coefficient(idx[i], idx[j], params)
    assert E.is_symmetric()


def test_enumeration_order_and_size():
    params = hf.FrameParams(2, 1, 2, 3)
    sector = hf.enumerate_sector(params)
    flats = [M.flat for M in sector]
    assert flats == sorted(flats, reverse=True)
    assert len(flats) == hf.sector_dimension(params) == len(set(flats))
    assert all(M.degree == 3 for M in sector)


def test_index_layout():
    M = hf.FrameIndex((1, 2, 3, 4, 5, 6, 7, 8), l=2, k=2, d=2)
    assert M.entry(1, 0) == (5, 6)
    assert M.coordinate(0, 1) == (2, 4)
    assert M.weight == math.prod(math.factorial(v) for v in range(1, 9))


def test_sector_cap():
    with pytest.raises(hf.SectorTooLarge):
        hf.enumerate_sector(hf.FrameParams(2, 1, 3, 8), cap=100)


@pytest.mark.parametrize("kld", [(3, 1, 1), (2, 2, 1), (2, 1, 2)])
@pytest.mark.parametrize("S", range(5))
def test_projection_when_mu_is_one(kld, S):
    params = hf.FrameParams(*kld, S)
    assert params.mu() == 1
    assert hf.idempotency_defect(params) == 0


@pytest.mark.parametrize("kld", [(2, 1, 3), (2, 1, 4), (3, 1, 2)])
def test_not_a_projection_otherwise(kld):
    assert hf.idempotency_defect(hf.FrameParams(*kld, 2)) > 0


@pytest.mark.parametrize("kld,S,expected", [
    ((2, 1, 3), 4, Fraction(15, 8)),       # (3/2)_2 / 2!
    ((3, 1, 2), 6, Fraction(4)),           # (2)_3 / 3!
    ((4, 1, 1), 5, Fraction(15, 8)),
    ((2, 1, 2), 6, Fraction(1)),
])
def test_norm_law(kld, S, expected):
    num, pred = hf.sector_norm(hf.FrameParams(*kld, S))
    assert pred == expected
    assert num == pytest.approx(float(expected), rel=1e-10)


def test_no_prediction_below_one():
    _, pred = hf.sector_norm(hf.FrameParams(2, 1, 1, 3))
    assert pred is None


def test_norm_asymptote_tracks_growth():
    mu = Fraction(3)
    ratio = float(hf.predicted_norm(hf.FrameParams(7, 1, 1, 200))) / hf.norm_asymptote(mu, 200)
    assert ratio == pytest.approx(1, rel=0.05)


@pytest.mark.parametrize("kld", [(2, 1, 2), (3, 1, 1)])
@pytest.mark.parametrize("S", range(4))
def test_kernel_identity(kld, S):
    assert hf.ks_kernel_check(hf.FrameParams(*kld, S)) == 0


def test_kernel_identity_beyond_mu_one():
    assert hf.ks_kernel_check(hf.FrameParams(2, 1, 3, 2)) == 0
    assert hf.ks_kernel_check(hf.FrameParams(2, 1, 3), order=3) == 0


def test_kernel_identity_detects_wrong_weights(monkeypatch):
    real = hf.pochhammer
    monkeypatch.setattr(hf, "pochhammer", lambda mu, s: real(mu + Fraction(1, 2), s))
    assert hf.ks_kernel_check(hf.FrameParams(2, 1, 2, 2)) > 0


def _eval_h(g, x):
    x = np.atleast_2d(x)
    out = np.zeros(x.shape[0], dtype=complex)
    for m, c in g.terms.items():
        term = np.ones(x.shape[0])
        for j, mj in enumerate(m):
            term = term * hermite_eval(mj, x[:, j])
        out += c * term
    return out


coeffs = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
h_expansions = st.dictionaries(st.tuples(st.integers(0, 5), st.integers(0, 5)), coeffs,
                               min_size=1, max_size=5).map(lambda t: ModeExpansion("hermite-h", 2, t))
unit = st.floats(0, 2 * math.pi).map(lambda a: complex(math.cos(a), math.sin(a)))


@given(h_expansions, unit, unit)
def test_t_omega_is_a_group(g, w1, w2):
    a = hf.t_omega_apply(hf.t_omega_apply(g, w2), w1)
    b = hf.t_omega_apply(g, w1 * w2)
    for m in g.terms:
        assert a.terms[m] == pytest.approx(b.terms[m], rel=1e-12, abs=1e-12)


@given(h_expansions)
def test_t_minus_one_reflects(g):
    x = np.array([[0.3, -1.2], [1.7, 0.4]])
    assert np.allclose(_eval_h(hf.t_omega_apply(g, -1), x), _eval_h(g, -x))


def test_t_omega_rejects_phi_basis():
    with pytest.raises(ValueError):
        hf.t_omega_apply(ModeExpansion("hermite-phi", 1, {(0,): 1}), 0.5)


@pytest.mark.parametrize("omega", [0.1, 0.3, -0.5])
def test_mehler_kernel(omega):
    assert hf.mehler_kernel_check(omega, 60, [0.7, -0.2], [-0.4, 1.1]) < 1e-10


def test_quarter_shift():
    assert hf.quarter_shift_identity(50)


def test_form_at_gaussian_saturates():
    form, mass = hf.strichartz_form_hermite(hf.FrameParams(2, 1, 2), {(0, 0): 1.0})
    assert form.real == pytest.approx(mass)


@given(st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)), coeffs, min_size=1, max_size=3))
def test_form_below_mass_when_projection(alpha):
    form, mass = hf.strichartz_form_hermite(hf.FrameParams(2, 1, 2), alpha)
    assert abs(form.imag) <= 1e-9 * max(mass, 1)
    assert form.real <= mass * (1 + 1e-12) + 1e-12
