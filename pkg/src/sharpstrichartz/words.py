"""Four-letter word parity counts and the closed double-binomial formula.

For letters 1^a 2^b 3^c 4^d, every distinct arrangement ``w`` is compared with
the sorted word ``e = 1..1 2..2 3..3 4..4``; ``D(w, e)`` counts positions
where they differ.  The signed count ``#even - #odd`` over ``2^N`` equals the
Laguerre product integral Q(a, b, c, d).
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactnum import binomial, multinomial

DEFAULT_WORD_CAP = 10**7


class EnumerationCapExceeded(RuntimeError):
    pass


def _next_permutation(w: list[int]) -> int:
    """Advance ``w`` to its lexicographic successor in place.

    Returns the first index that changed, or -1 when ``w`` was the last one.
    """
    i = len(w) - 2
    while i >= 0 and w[i] >= w[i + 1]:
        i -= 1
    if i < 0:
        return -1
    j = len(w) - 1
    while w[j] <= w[i]:
        j -= 1
    w[i], w[j] = w[j], w[i]
    w[i + 1:] = reversed(w[i + 1:])
    return i


def parity_counts(a: int, b: int, c: int, d: int, cap: int = DEFAULT_WORD_CAP) -> tuple[int, int]:
    """(#even, #odd) by visiting every distinct arrangement once."""
    if min(a, b, c, d) < 0:
        raise ValueError("letter counts must be non-negative")
    total = multinomial(a, b, c, d)
    if total > cap:
        raise EnumerationCapExceeded(
            f"{total} words exceed the enumeration cap {cap}; use q_explicit instead"
        )
    elem = [1] * a + [2] * b + [3] * c + [4] * d
    n = len(elem)
    if n == 0:
        return 1, 0
    w = list(elem)
    # prefix[i] = #mismatches among positions < i
    prefix = [0] * (n + 1)
    even = odd = 0
    start = 0
    while True:
        for i in range(start, n):
            prefix[i + 1] = prefix[i] + (w[i] != elem[i])
        if prefix[n] & 1:
            odd += 1
        else:
            even += 1
        start = _next_permutation(w)
        if start < 0:
            break
    return even, odd


def signed_count(a: int, b: int, c: int, d: int, cap: int = DEFAULT_WORD_CAP) -> int:
    even, odd = parity_counts(a, b, c, d, cap)
    return even - odd


def q_from_words(a: int, b: int, c: int, d: int, cap: int = DEFAULT_WORD_CAP) -> Fraction:
    """(#even - #odd) / 2^N.  N = 0 gives 1, the value of the integral."""
    n = a + b + c + d
    if n == 0:
        return Fraction(1)
    return Fraction(signed_count(a, b, c, d, cap), 2**n)


def _alternating_sum(p: int, q: int, u: int) -> int:
    """Σ_r (-1)^r C(p, r) C(q, u-r)."""
    return sum(
        (-1) ** r * int(binomial(p, r)) * int(binomial(q, u - r)) for r in range(u + 1)
    )


def q_explicit(a: int, b: int, c: int, d: int) -> Fraction:
    n = a + b + c + d
    U = min(a + b, c + d)
    denom = factorial(a) * factorial(b) * factorial(c) * factorial(d)
    total = 0
    for u in range(U + 1):
        inner = _alternating_sum(a, b, u) * _alternating_sum(c, d, u)
        if inner == 0:
            continue
        total += (
            factorial(a + b - u) * factorial(c + d - u) * factorial(u) ** 2 * inner * inner
        )
    return Fraction(total, denom * 2**n)
