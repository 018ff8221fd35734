"""The Laguerre operator Q on ℓ²(Z_+²) for radial data in the plane.

Q(a, b, c, d) = ∫_0^∞ L_a(x/2) L_b(x/2) L_c(x/2) L_d(x/2) e^{-x} dx, and the
sector block Q_S = [Q(a, S-a, c, S-c)]_{a,c} acts on sequences supported on
the anti-diagonal a + b = S.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import numpy as np

from .orthopoly import Poly, integrate_exponential, laguerre

DEFAULT_Q_CAP = 40


class ConsistencyError(ArithmeticError):
    """An exact invariant that cannot fail unless the arithmetic is wrong."""


class SectorCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class QIndex:
    a: int
    b: int
    c: int
    d: int

    @property
    def N(self) -> int:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class SectorMatrix:
    S: int
    entries: tuple[tuple[Fraction, ...], ...]

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.entries]

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]


@lru_cache(maxsize=None)
def _half_laguerre(n: int) -> Poly:
    return laguerre(n, 0).rescale(Fraction(1, 2))


@lru_cache(maxsize=None)
def _pair(a: int, b: int) -> Poly:
    if a > b:
        a, b = b, a
    return _half_laguerre(a) * _half_laguerre(b)


def q_coefficient(a: int, b: int, c: int, d: int) -> Fraction:
    """Exact Q(a, b, c, d) from the polynomial product and e^{-x} moments."""
    if isinstance(a, QIndex):
        a, b, c, d = a.a, a.b, a.c, a.d
    return integrate_exponential(_pair(a, b) * _pair(c, d), 0)


def assemble_QS(S: int, cap: int = DEFAULT_Q_CAP) -> SectorMatrix:
    """Exact Q_S, validated doubly stochastic with positive entries."""
    if S < 0:
        raise ValueError("sector index must be >= 0")
    if S > cap:
        raise SectorCapExceeded(f"S={S} exceeds the Laguerre sector cap {cap}")
    return _assemble_cached(S)


@lru_cache(maxsize=64)
def _assemble_cached(S: int) -> SectorMatrix:
    rows = [[Fraction(0)] * (S + 1) for _ in range(S + 1)]
    for a in range(S + 1):
        for c in range(a, S + 1):
            v = q_coefficient(a, S - a, c, S - c)
            rows[a][c] = rows[c][a] = v
    for a, row in enumerate(rows):
        s = sum(row, Fraction(0))
        if s != 1:
            raise ConsistencyError(f"Q_{S} row {a} sums to {s}, not 1")
        if min(row) <= 0:
            raise ConsistencyError(f"Q_{S} row {a} has a non-positive entry")
    return SectorMatrix(S, tuple(tuple(r) for r in rows))


def f_matrix(S: int) -> list[list[Fraction]]:
    """Rows u = 0..S, columns a = 0..S; Q_S = F^T F."""
    out = []
    for u in range(S + 1):
        row = []
        for a in range(S + 1):
            alt = sum((-1) ** r * comb(a, r) * _comb0(S - a, u - r) for r in range(u + 1))
            row.append(
                Fraction(factorial(S - u) * factorial(u) * alt * alt,
                         factorial(a) * factorial(S - a) * 2**S)
            )
        out.append(row)
    return out


def _comb0(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def f_factorization(S: int, cap: int = DEFAULT_Q_CAP) -> tuple[list[list[Fraction]], Fraction]:
    """(F, max |Q_S - F^T F|) with exact arithmetic."""
    Q = assemble_QS(S, cap)
    F = f_matrix(S)
    defect = Fraction(0)
    for a in range(S + 1):
        for c in range(S + 1):
            ftf = sum((F[u][a] * F[u][c] for u in range(S + 1)), Fraction(0))
            defect = max(defect, abs(Q[a, c] - ftf))
    return F, defect


def sector_spectrum(S: int, cap: int = DEFAULT_Q_CAP) -> list[float]:
    """Eigenvalues of Q_S, descending."""
    vals = np.linalg.eigvalsh(assemble_QS(S, cap).to_float())
    return sorted(vals.tolist(), reverse=True)


@dataclass
class SpectrumReport:
    S: int
    eigenvalues: list[float]
    top_vector_defect: float
    ok: bool


def spectrum_contract(S: int, tol: float = 1e-10, cap: int = DEFAULT_Q_CAP) -> SpectrumReport:
    """Top eigenvalue 1 (simple, eigenvector ∝ ones), the rest in [0, 1)."""
    A = assemble_QS(S, cap).to_float()
    vals, vecs = np.linalg.eigh(A)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    top = vecs[:, 0] * np.sign(vecs[0, 0])
    ones = np.ones(S + 1) / np.sqrt(S + 1)
    vec_defect = float(np.max(np.abs(top - ones)))
    ok = abs(vals[0] - 1.0) <= tol and vec_defect <= 1e-8 and vals[-1] >= -tol
    if S > 0:
        ok = ok and vals[1] < 1.0 - tol
    return SpectrumReport(S, vals.tolist(), vec_defect, bool(ok))


def sector_vector(alpha: Sequence[complex], S: int) -> np.ndarray:
    """φ_S(a) = α(a) α(S-a), zero outside the support of α."""
    n = len(alpha)
    return np.array(
        [alpha[a] * alpha[S - a] if a < n and S - a < n else 0.0 for a in range(S + 1)],
        dtype=complex,
    )


def strichartz_form_laguerre(alpha: Sequence[complex], cap: int = DEFAULT_Q_CAP) -> tuple[float, float]:
    """((1/16)⟨φ, Qφ⟩, (1/16)‖φ‖²) for φ(a, b) = α(a)α(b)."""
    alpha = list(alpha)
    if not alpha:
        return 0.0, 0.0
    smax = 2 * (len(alpha) - 1)
    form = 0.0
    for S in range(smax + 1):
        phi = sector_vector(alpha, S)
        if not np.any(phi):
            continue
        Q = assemble_QS(S, cap).to_float()
        form += float(np.real(np.vdot(phi, Q @ phi)))
    mass = float(sum(abs(x) ** 2 for x in alpha))
    return form / 16.0, mass**2 / 16.0


def fixed_point_check(phi: Sequence, S: int, cap: int = DEFAULT_Q_CAP) -> bool:
    """Q_S φ == φ in exact arithmetic."""
    if len(phi) != S + 1:
        raise ValueError(f"sector {S} vectors have length {S + 1}")
    phi = [Fraction(v) for v in phi]
    Q = assemble_QS(S, cap)
    for a in range(S + 1):
        if sum((Q[a, c] * phi[c] for c in range(S + 1)), Fraction(0)) != phi[a]:
            return False
    return True
