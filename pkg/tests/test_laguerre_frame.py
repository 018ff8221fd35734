from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpstrichartz.laguerre_frame import (
    SectorCapExceeded, assemble_QS, f_factorization, fixed_point_check, q_coefficient,
    sector_spectrum, spectrum_contract, strichartz_form_laguerre,
)
from sharpstrichartz.orthopoly import integrate_exponential, laguerre


def test_first_sectors():
    assert assemble_QS(0).entries == ((Fraction(1),),)
    half = Fraction(1, 2)
    assert assemble_QS(1).entries == ((half, half), (half, half))
    Q2 = assemble_QS(2)
    assert Q2[0, 0] == Fraction(3, 8) and Q2[1, 1] == Fraction(1, 2)


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_q_coefficient_is_the_integral(a, b, c, d):
    # ∫_0^∞ L_a(x/2) L_b(x/2) L_c(x/2) L_d(x/2) e^{-x} dx from the exact polynomial algebra
    half = [laguerre(n).rescale(Fraction(1, 2)) for n in (a, b, c, d)]
    p = half[0] * half[1] * half[2] * half[3]
    assert q_coefficient(a, b, c, d) == integrate_exponential(p, 0)


@pytest.mark.parametrize("S", range(11))
def test_doubly_stochastic_and_factorized(S):
    Q = assemble_QS(S)
    assert all(s == 1 for s in Q.row_sums())
    assert all(v > 0 for row in Q.entries for v in row)
    assert f_factorization(S)[1] == 0


@given(st.integers(0, 12))
def test_symmetric(S):
    Q = assemble_QS(S)
    assert all(Q[a, c] == Q[c, a] for a in range(S + 1) for c in range(S + 1))


def test_sector_one_spectrum():
    vals = sector_spectrum(1)
    assert vals[0] == pytest.approx(1.0)
    assert 0 <= vals[1] + 1e-12 and vals[1] < 1


@pytest.mark.parametrize("S", range(13))
def test_spectrum_contract(S):
    assert spectrum_contract(S).ok


@given(st.integers(0, 10))
def test_ones_fixed(S):
    assert fixed_point_check([1] * (S + 1), S)


def test_non_constant_not_fixed():
    assert not fixed_point_check([1, 0, 0], 2)
    with pytest.raises(ValueError):
        fixed_point_check([1, 1], 2)


def test_cap():
    with pytest.raises(SectorCapExceeded):
        assemble_QS(5, cap=4)


def test_geometric_data_nearly_saturates():
    w = 0.5
    form, mass = strichartz_form_laguerre([w**j for j in range(13)])
    assert 1 - 1e-6 <= form / mass <= 1 + 1e-12


@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=5))
def test_form_bounded_by_mass(alpha):
    form, mass = strichartz_form_laguerre(alpha)
    assert form <= mass * (1 + 1e-12) + 1e-300
