"""Exact rational scalars and the combinatorial constants used everywhere else.

``Rational`` is :class:`fractions.Fraction`: arbitrary-precision numerator and
denominator, always reduced, denominator positive.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "factorial",
    "pochhammer",
    "double_factorial",
    "gaussian_moment",
    "binomial",
    "multinomial",
    "rational_to_str",
    "rational_from_str",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return rational_from_str(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def factorial(n: int) -> Fraction:
    if n < 0:
        raise ValueError("factorial of a negative number")
    return Fraction(math.factorial(n))


def pochhammer(mu, s: int) -> Fraction:
    """Rising factorial mu (mu+1) ... (mu+s-1); empty product for s = 0."""
    if s < 0:
        raise ValueError("pochhammer needs s >= 0")
    mu = as_rational(mu)
    out = Fraction(1)
    for i in range(s):
        out *= mu + i
    return out


@lru_cache(maxsize=None)
def _double_factorial_int(n: int) -> int:
    if n <= 0:
        return 1
    return n * _double_factorial_int(n - 2)


def double_factorial(n: int) -> int:
    """n!! with the convention (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError("double factorial defined for n >= -1")
    return _double_factorial_int(n)


def gaussian_moment(n: int) -> Fraction:
    """E[x^n] under the standard normal law."""
    if n < 0:
        raise ValueError("moment order must be >= 0")
    if n % 2:
        return Fraction(0)
    return Fraction(_double_factorial_int(n - 1))


def binomial(n: int, k: int) -> Fraction:
    """Binomial coefficient, zero whenever k < 0 or k > n."""
    if k < 0 or n < 0 or k > n:
        return Fraction(0)
    return Fraction(math.comb(n, k))


def multinomial(*parts: int) -> int:
    out, total = 1, 0
    for p in parts:
        total += p
        out *= math.comb(total, p)
    return out


def rational_to_str(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))
