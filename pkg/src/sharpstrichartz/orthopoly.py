"""Hermite, Laguerre and Gegenbauer polynomials with exact rational coefficients.

Conventions
-----------
Hermite polynomials are the *probabilists'* ones: monic, orthogonal for
``dγ(x) = (2π)^{-1/2} exp(-x²/2) dx`` with ``∫ H_n² dγ = n!``.  They are not the
physicists' ``H_n`` (``numpy.polynomial.hermite``), which differ by
``2^{n/2}`` scalings of both argument and value.

Laguerre polynomials ``L_n^{(ν)}`` use the classical normalisation
``∫ (L_n^{(ν)})² e^{-x} x^ν dx = Γ(n+ν+1)/n!`` and Gegenbauer polynomials
satisfy ``C_n^ν(1) = Γ(n+2ν)/(Γ(2ν) n!)``.

Floating-point evaluators at the bottom are for quadrature work and come from
:mod:`scipy.special`; every exact path uses :class:`Poly`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from .exactnum import (
    as_rational,
    binomial,
    double_factorial,
    factorial,
    pochhammer,
    rational_to_str,
)


class Poly:
    """Dense univariate polynomial over the rationals, ascending powers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def __call__(self, x):
        acc = 0 if not isinstance(x, Fraction) else Fraction(0)
        for c in reversed(self.coeffs):
            if isinstance(x, (Fraction, int)):
                acc = acc * x + c
            else:
                acc = acc * x + float(c)
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(str(c) for c in self.coeffs)}])"

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __add__(self, other) -> "Poly":
        other = _lift(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[j] + other[j] for j in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def rescale(self, c) -> "Poly":
        """The polynomial x -> p(c x)."""
        c = as_rational(c)
        return Poly([a * c**j for j, a in enumerate(self.coeffs)])

    def compose(self, q: "Poly") -> "Poly":
        out = Poly()
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def to_json(self) -> list[str]:
        return [rational_to_str(c) for c in self.coeffs]


def _lift(other):
    if isinstance(other, Poly):
        return other
    if isinstance(other, (int, Fraction)):
        return Poly([other])
    return NotImplemented


# ---------------------------------------------------------------------------
# families


@lru_cache(maxsize=None)
def hermite(n: int) -> Poly:
    """Monic probabilists' Hermite polynomial via H_{n+1} = x H_n - n H_{n-1}."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    if n == 0:
        return Poly([1])
    if n == 1:
        return Poly([0, 1])
    return Poly.x() * hermite(n - 1) - hermite(n - 2) * (n - 1)


def hermite_at_zero(n: int) -> Fraction:
    if n % 2:
        return Fraction(0)
    return Fraction((-1) ** (n // 2) * double_factorial(n - 1))


def laguerre(n: int, nu=0) -> Poly:
    """Generalised Laguerre polynomial L_n^{(nu)} for rational nu > -1."""
    nu = as_rational(nu)
    if nu <= -1:
        raise ValueError("Laguerre parameter must satisfy nu > -1")
    if n < 0:
        raise ValueError("degree must be >= 0")
    return _laguerre_cached(n, nu)


@lru_cache(maxsize=None)
def _laguerre_cached(n: int, nu: Fraction) -> Poly:
    # binom(n+nu, n-j) = (nu+j+1)_{n-j} / (n-j)!, rational for rational nu
    coeffs = []
    for j in range(n + 1):
        b = pochhammer(nu + j + 1, n - j) / factorial(n - j)
        coeffs.append((-1) ** j * b / factorial(j))
    return Poly(coeffs)


def gegenbauer(n: int, nu) -> Poly:
    """Gegenbauer polynomial C_n^{nu} for rational nu > -1/2, nu != 0."""
    nu = as_rational(nu)
    if nu <= Fraction(-1, 2):
        raise ValueError("Gegenbauer parameter must satisfy nu > -1/2")
    if nu == 0:
        raise ValueError("nu = 0 degenerates (Chebyshev limit); not supported")
    if n < 0:
        raise ValueError("degree must be >= 0")
    return _gegenbauer_cached(n, nu)


@lru_cache(maxsize=None)
def _gegenbauer_cached(n: int, nu: Fraction) -> Poly:
    if n == 0:
        return Poly([1])
    if n == 1:
        return Poly([0, 2 * nu])
    prev = _gegenbauer_cached(n - 1, nu)
    prev2 = _gegenbauer_cached(n - 2, nu)
    return (Poly([0, 2 * (n + nu - 1)]) * prev - prev2 * (n + 2 * nu - 2)) * Fraction(1, n)


def gegenbauer_at_one(n: int, nu) -> Fraction:
    """Gamma(n+2nu)/(Gamma(2nu) n!) written as (2nu)_n / n!."""
    nu = as_rational(nu)
    return pochhammer(2 * nu, n) / factorial(n)


# ---------------------------------------------------------------------------
# exact integration


@dataclass(frozen=True)
class GradedPoly:
    """Polynomial in x whose x^J coefficient carries an implicit lambda^J.

    Only ``lambda_sq`` is stored; after integration against dγ only even J
    survive, so the value is rational.
    """

    coeffs: tuple[Fraction, ...]
    lambda_sq: Fraction

    @classmethod
    def hermite_product(cls, degrees: Sequence[int], lambda_sq) -> "GradedPoly":
        """prod_j H_{m_j}(lambda x)."""
        p = Poly([1])
        for m in degrees:
            p = p * hermite(m)
        return cls(p.coeffs, as_rational(lambda_sq))

    def __mul__(self, other: "GradedPoly") -> "GradedPoly":
        if self.lambda_sq != other.lambda_sq:
            raise ValueError("cannot multiply graded polys with different lambda")
        return GradedPoly((Poly(self.coeffs) * Poly(other.coeffs)).coeffs, self.lambda_sq)


def integrate_gaussian(p: GradedPoly) -> Fraction:
    """∫ p(lambda x) dγ(x), exact."""
    total = Fraction(0)
    lam2_pow = Fraction(1)
    for J in range(0, len(p.coeffs), 2):
        c = p.coeffs[J]
        if c:
            total += c * lam2_pow * double_factorial(J - 1)
        lam2_pow *= p.lambda_sq
    return total


def integrate_gaussian_poly(p: Poly) -> Fraction:
    """∫ p(x) dγ(x) for an ordinary polynomial."""
    return integrate_gaussian(GradedPoly(p.coeffs, Fraction(1)))


def integrate_exponential(p: Poly, nu: int = 0) -> Fraction:
    """∫_0^∞ p(x) e^{-x} x^nu dx for integer nu >= 0."""
    if int(nu) != nu or nu < 0:
        raise ValueError("integrate_exponential needs integer nu >= 0")
    nu = int(nu)
    total = Fraction(0)
    fact = factorial(nu)  # (j + nu)! built incrementally
    for j, c in enumerate(p.coeffs):
        if j:
            fact *= j + nu
        total += c * fact
    return total


def hermite_scale_expansion(n: int, lambda_sq) -> list[tuple[int, Fraction, int]]:
    """Coefficients of H_n(lambda x) in the basis H_a(x).

    Returns triples ``(a, c, h)`` meaning ``H_n(lambda x) = Σ c * lambda^h * H_a(x)``
    with ``h = a``.  Only ``a ≡ n (mod 2)`` appear, so ``(1-lambda²)^{(n-a)/2}``
    is rational.
    """
    lam2 = as_rational(lambda_sq)
    if not 0 < lam2 < 1:
        raise ValueError("lambda_sq must lie in (0, 1)")
    out = []
    for a in range(n % 2, n + 1, 2):
        c = binomial(n, a) * (1 - lam2) ** ((n - a) // 2) * hermite_at_zero(n - a)
        out.append((a, c, a))
    return out


# ---------------------------------------------------------------------------
# float evaluators (quadrature side)


def hermite_eval(n: int, x):
    return special.eval_hermitenorm(n, np.asarray(x, dtype=float))


def laguerre_eval(n: int, nu: float, x):
    return special.eval_genlaguerre(n, float(nu), np.asarray(x, dtype=float))


def gegenbauer_eval(n: int, nu: float, x):
    return special.eval_gegenbauer(n, float(nu), np.asarray(x, dtype=float))


def hermite_table(nmax: int, x) -> np.ndarray:
    """Rows H_0(x) .. H_nmax(x) by the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = x
    for n in range(1, nmax):
        out[n + 1] = x * out[n] - n * out[n - 1]
    return out
