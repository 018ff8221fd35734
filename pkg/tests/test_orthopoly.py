from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpstrichartz.exactnum import factorial, gaussian_moment
from sharpstrichartz.orthopoly import (
    GradedPoly, Poly, gegenbauer, gegenbauer_at_one, gegenbauer_eval, hermite, hermite_at_zero,
    hermite_eval, hermite_scale_expansion, hermite_table, integrate_exponential, integrate_gaussian,
    integrate_gaussian_poly, laguerre, laguerre_eval,
)

halves = st.sampled_from([Fraction(1, 2), Fraction(1), Fraction(3, 2)])


def test_low_hermite():
    assert hermite(2) == Poly([-1, 0, 1])
    assert hermite(3) == Poly([0, -3, 0, 1])


@pytest.mark.parametrize("n", range(13))
def test_hermite_norms(n):
    assert integrate_gaussian_poly(hermite(n) * hermite(n)) == factorial(n)


@given(st.integers(0, 10), st.integers(0, 10))
def test_hermite_orthogonal(m, n):
    val = integrate_gaussian_poly(hermite(m) * hermite(n))
    assert val == (factorial(n) if m == n else 0)


@given(st.integers(0, 20))
def test_laguerre_at_zero(n):
    assert laguerre(n)(Fraction(0)) == 1


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 3))
def test_laguerre_orthogonality(m, n, nu):
    val = integrate_exponential(laguerre(m, nu) * laguerre(n, nu), nu)
    expected = factorial(n + nu) / factorial(n) if m == n else 0
    assert val == expected


@pytest.mark.parametrize("nu", [Fraction(1, 2), Fraction(1), Fraction(3, 2)])
@pytest.mark.parametrize("n", range(11))
def test_gegenbauer_at_one(n, nu):
    assert gegenbauer(n, nu)(Fraction(1)) == gegenbauer_at_one(n, nu)


def test_gegenbauer_zero_parameter_rejected():
    with pytest.raises(ValueError):
        gegenbauer(3, 0)


@pytest.mark.parametrize("n", range(0, 9, 2))
def test_scaled_hermite_mean(n):
    lam2 = Fraction(1, 3)
    expected = (1 - lam2) ** (n // 2) * hermite_at_zero(n)
    assert integrate_gaussian(GradedPoly.hermite_product([n], lam2)) == expected


@given(st.integers(0, 9))
def test_scale_expansion_reassembles(n):
    lam2 = Fraction(1, 4)
    lam = Fraction(1, 2)
    lhs = hermite(n).rescale(lam)
    rhs = Poly()
    for a, c, h in hermite_scale_expansion(n, lam2):
        rhs = rhs + hermite(a) * (c * lam**h)
    assert lhs == rhs


@given(st.lists(st.integers(-3, 3), max_size=6))
def test_gaussian_integral_is_linear_in_moments(coeffs):
    p = Poly(coeffs)
    assert integrate_gaussian_poly(p) == sum(Fraction(c) * gaussian_moment(j) for j, c in enumerate(coeffs))


def test_float_evaluators_agree_with_exact():
    x = np.linspace(-2, 2, 7)
    for n in range(8):
        assert np.allclose(hermite_eval(n, x), [float(hermite(n)(Fraction(v).limit_denominator())) for v in x])
        assert np.allclose(hermite_table(7, x)[n], hermite_eval(n, x))
        assert np.allclose(laguerre_eval(n, 1.0, x), [float(laguerre(n, 1)(Fraction(v).limit_denominator())) for v in x])
        assert np.allclose(gegenbauer_eval(n, 1.5, x / 2),
                           [float(gegenbauer(n, Fraction(3, 2))(Fraction(v / 2).limit_denominator())) for v in x])
