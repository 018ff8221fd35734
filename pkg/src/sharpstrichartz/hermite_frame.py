"""Hermite sector operators P_S on the frame space of ℓ×k matrices of multi-indices.

An index M = [m^{i,j}] (i < ℓ, j < k, each m^{i,j} in Z_+^d) is stored flat as
an (ℓ·k·d)-tuple in row-major (i, j, c) order.  With λ² = 1/k,

    P(M, N) = ∫ Π_{i,j} H_{m^{i,j}}(λx^i) H_{n^{i,j}}(λx^i) dγ_d(x^1)…dγ_d(x^ℓ)

and the sector operator is A(M, N) = P(M, N)/M! on |M| = |N| = S.

The Gaussian integral factors over the ℓ·d scalar coordinates.  For a
coordinate carrying degrees t = (t_1..t_k) write Π_j H_{t_j}(λx) =
Σ_J c_J λ^J x^J.  Then ``k^{(|t|+|u|)/2} ∫ f_t f_u dγ`` is an integer
``Z[t, u]``, so a whole sector is ``k^{-S} Π_coords Z`` with no fractions
until the very end.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np
from scipy import linalg

from .exactnum import double_factorial, pochhammer
from .orthopoly import GradedPoly, hermite, hermite_eval, integrate_gaussian
from .schrodinger import ModeExpansion

DEFAULT_SECTOR_CAP = 20000
_INT64_SAFE = 2**62


class SectorTooLarge(ValueError):
    pass


class EigenSolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class FrameParams:
    k: int
    l: int
    d: int
    S: int = 0

    def __post_init__(self):
        if self.k < 2 or self.l < 1 or self.d < 1 or self.S < 0:
            raise ValueError(f"need k >= 2, l >= 1, d >= 1, S >= 0; got {self}")

    def mu(self) -> Fraction:
        return Fraction((self.k - 1) * self.l * self.d, 2)

    @property
    def lambda_sq(self) -> Fraction:
        return Fraction(1, self.k)

    @property
    def slots(self) -> int:
        return self.l * self.k * self.d

    def with_S(self, S: int) -> "FrameParams":
        return FrameParams(self.k, self.l, self.d, S)


MultiIndex = tuple  # d non-negative ints


@dataclass(frozen=True)
class FrameIndex:
    flat: tuple[int, ...]
    l: int
    k: int
    d: int

    def entry(self, i: int, j: int) -> MultiIndex:
        base = (i * self.k + j) * self.d
        return self.flat[base:base + self.d]

    @property
    def grid(self) -> tuple[tuple[MultiIndex, ...], ...]:
        return tuple(tuple(self.entry(i, j) for j in range(self.k)) for i in range(self.l))

    @property
    def degree(self) -> int:
        return sum(self.flat)

    @property
    def weight(self) -> int:
        return _weight(self.flat)

    def coordinate(self, i: int, c: int) -> tuple[int, ...]:
        """Degrees carried by the scalar coordinate x^i_c."""
        return tuple(self.flat[(i * self.k + j) * self.d + c] for j in range(self.k))


def _weight(flat: Sequence[int]) -> int:
    w = 1
    for m in flat:
        w *= math.factorial(m)
    return w


def _compositions(S: int, n: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of S into n parts, lexicographically descending."""
    if n == 1:
        yield (S,)
        return
    for first in range(S, -1, -1):
        for rest in _compositions(S - first, n - 1):
            yield (first,) + rest


def sector_dimension(params: FrameParams) -> int:
    n = params.slots
    return math.comb(params.S + n - 1, n - 1)


def _check_cap(params: FrameParams, cap: int) -> int:
    dim = sector_dimension(params)
    if dim > cap:
        raise SectorTooLarge(
            f"sector (k={params.k}, l={params.l}, d={params.d}, S={params.S}) has "
            f"dimension {dim} > cap {cap}"
        )
    return dim


def enumerate_sector(params: FrameParams, cap: int = DEFAULT_SECTOR_CAP) -> list[FrameIndex]:
    _check_cap(params, cap)
    k, l, d = params.k, params.l, params.d
    return [FrameIndex(t, l, k, d) for t in _compositions(params.S, params.slots)]


# ---------------------------------------------------------------------------
# single coefficients (reference route)


@lru_cache(maxsize=None)
def _coordinate_integral(degrees: tuple[int, ...], k: int) -> Fraction:
    return integrate_gaussian(GradedPoly.hermite_product(degrees, Fraction(1, k)))


def _flat(M, params: FrameParams) -> tuple[int, ...]:
    flat = M.flat if isinstance(M, FrameIndex) else tuple(M)
    if len(flat) != params.slots:
        raise ValueError(f"index has {len(flat)} entries, expected {params.slots}")
    return flat


def p_coefficient(M, N, params: FrameParams) -> Fraction:
    """Exact P(M, N) as a product of one-dimensional Gaussian integrals."""
    m, n = _flat(M, params), _flat(N, params)
    k, d = params.k, params.d
    out = Fraction(1)
    for i in range(params.l):
        for c in range(d):
            degs = [m[(i * k + j) * d + c] for j in range(k)]
            degs += [n[(i * k + j) * d + c] for j in range(k)]
            if sum(degs) % 2:
                return Fraction(0)
            out *= _coordinate_integral(tuple(sorted(degs)), k)
            if out == 0:
                return out
    return out


# ---------------------------------------------------------------------------
# fast sector assembly


@lru_cache(maxsize=None)
def _product_coeffs(t: tuple[int, ...]) -> tuple[int, ...]:
    p = hermite(0)
    for m in t:
        p = p * hermite(m)
    return tuple(int(c) for c in p.coeffs)


@dataclass(frozen=True)
class _CoordinateTable:
    index: dict
    Z: np.ndarray  # int64 or object


@lru_cache(maxsize=32)
def _coordinate_table(k: int, S: int, exact_sum: bool) -> _CoordinateTable:
    """Integer Gram table Z[t, u] = k^{(|t|+|u|)/2} ∫ f_t f_u dγ over k-tuples.

    ``exact_sum`` restricts to |t| = S (enough when a sector has a single
    coordinate); otherwise every |t| <= S is included.
    """
    sums = [S] if exact_sum else range(S + 1)
    tuples = [t for s in sums for t in _compositions(s, k)]
    F = np.zeros((len(tuples), S + 1), dtype=object)
    for r, t in enumerate(tuples):
        deg = sum(t)
        for J, c in enumerate(_product_coeffs(t)):
            if c:
                F[r, J] = c * k ** ((deg - J) // 2)
    mom = np.zeros((S + 1, S + 1), dtype=object)
    for a in range(S + 1):
        for b in range(S + 1):
            if (a + b) % 2 == 0:
                mom[a, b] = double_factorial(a + b - 1)
    Fabs = np.abs(F.astype(float))
    bound = float(np.max(Fabs @ mom.astype(float) @ Fabs.T)) if len(tuples) else 0.0
    if bound < _INT64_SAFE / 4:
        F64, m64 = F.astype(np.int64), mom.astype(np.int64)
        Z = F64 @ m64 @ F64.T
    else:
        Z = F.dot(mom).dot(F.T)
    Z.setflags(write=False)
    return _CoordinateTable({t: r for r, t in enumerate(tuples)}, Z)


def _sector_layout(params: FrameParams, cap: int):
    """Sector indices, per-coordinate table rows and the shared table."""
    _check_cap(params, cap)
    flats = list(_compositions(params.S, params.slots))
    ncoord = params.l * params.d
    table = _coordinate_table(params.k, params.S, ncoord == 1)
    k, d = params.k, params.d
    rows = np.empty((ncoord, len(flats)), dtype=np.int64)
    for r, m in enumerate(flats):
        for i in range(params.l):
            for c in range(d):
                t = tuple(m[(i * k + j) * d + c] for j in range(k))
                rows[i * d + c, r] = table.index[t]
    return flats, rows, table


@dataclass(frozen=True)
class ExactMatrix:
    """Sector matrix with entries ``numer / denom`` (the P values) and weights M!.

    The operator A(M, N) = P(M, N)/M! is ``entry(i, j) / weights[i]``.
    """

    indices: tuple[tuple[int, ...], ...]
    numer: np.ndarray = field(repr=False)
    denom: int
    weights: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.indices)

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numer[i, j]), self.denom)

    def operator_entry(self, i: int, j: int) -> Fraction:
        return Fraction(int(self.numer[i, j]), self.denom * self.weights[i])

    @property
    def entries(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.numer, self.numer.T))

    def symmetrized_float(self) -> np.ndarray:
        """D^{1/2} A D^{-1/2} = P(M, N)/sqrt(M! N!) as float64."""
        s = 1.0 / np.sqrt(np.array(self.weights, dtype=float))
        return self.numer.astype(float) / float(self.denom) * s[:, None] * s[None, :]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "indices": [list(t) for t in self.indices],
            "weights": [str(w) for w in self.weights],
            "entries": [[f"{self.entry(i, j).numerator}/{self.entry(i, j).denominator}"
                         for j in range(self.dim)] for i in range(self.dim)],
        }


def _product_over_coords(rows: np.ndarray, Z: np.ndarray, as_object: bool) -> np.ndarray:
    out = None
    for r in rows:
        block = Z[np.ix_(r, r)]
        if as_object:
            block = block.astype(object)
        out = block.copy() if out is None else out * block
    return out


def assemble_P(params: FrameParams, cap: int = DEFAULT_SECTOR_CAP) -> ExactMatrix:
    flats, rows, table = _sector_layout(params, cap)
    zmax = int(np.max(np.abs(table.Z))) if table.Z.size else 0
    as_object = table.Z.dtype == object or zmax ** len(rows) >= _INT64_SAFE
    numer = _product_over_coords(rows, table.Z, as_object)
    numer.setflags(write=False)
    return ExactMatrix(tuple(flats), numer, params.k ** params.S,
                       tuple(_weight(m) for m in flats))


def idempotency_defect(params: FrameParams, cap: int = DEFAULT_SECTOR_CAP) -> Fraction:
    """max |(A² - A)(M, L)| over the sector, exactly."""
    E = assemble_P(params, cap)
    Z = E.numer.astype(object)
    K = E.denom
    Lw = math.lcm(*E.weights)
    scale = np.array([Lw // w for w in E.weights], dtype=object)
    # (A² - A)(M, L) = (Σ_N Z_MN Z_NL Lw/N! - K Lw Z_ML) / (K² Lw M!)
    diff = (Z * scale[None, :]).dot(Z) - K * Lw * Z
    worst = Fraction(0)
    for i, w in enumerate(E.weights):
        top = max(abs(int(v)) for v in diff[i])
        if top:
            worst = max(worst, Fraction(top, K * K * Lw * w))
    return worst


def _symmetrized_float(params: FrameParams, cap: int) -> np.ndarray:
    """P(M,N)/sqrt(M!N!) assembled directly in float64 from the integer tables."""
    flats, rows, table = _sector_layout(params, cap)
    Zf = table.Z.astype(float)
    out = _product_over_coords(rows, Zf, False) / float(params.k ** params.S)
    s = 1.0 / np.sqrt(np.array([float(_weight(m)) for m in flats]))
    return out * s[:, None] * s[None, :]


def predicted_norm(params: FrameParams) -> Fraction:
    s = params.S // 2
    return pochhammer(params.mu(), s) / math.factorial(s)


def sector_norm(params: FrameParams, cap: int = DEFAULT_SECTOR_CAP) -> tuple[float, Fraction | None]:
    """(largest eigenvalue of the symmetrized sector operator, Pochhammer prediction).

    No prediction is made for μ = 1/2.
    """
    B = _symmetrized_float(params, cap)
    n = B.shape[0]
    try:
        top = linalg.eigh(B, eigvals_only=True, subset_by_index=[n - 1, n - 1])[0]
    except linalg.LinAlgError as exc:
        raise EigenSolverError(str(exc)) from exc
    pred = None if params.mu() < 1 else predicted_norm(params)
    return float(top), pred


def norm_asymptote(mu, S: int) -> float:
    """S^{μ-1} / (2^{μ-1} Γ(μ))."""
    mu = float(mu)
    return S ** (mu - 1) / (2 ** (mu - 1) * math.gamma(mu))


# ---------------------------------------------------------------------------
# kernel identities


def _monomials(degree_lists: Sequence[tuple[int, ...]]) -> dict[tuple[int, ...], int]:
    """Π_c Π_j H_{deg_{c,j}}(x_c) as {exponent tuple: integer coefficient}."""
    out: dict[tuple[int, ...], int] = {(): 1}
    for degs in degree_lists:
        coeffs = _product_coeffs(tuple(degs))
        nxt: dict[tuple[int, ...], int] = {}
        for key, v in out.items():
            for J, c in enumerate(coeffs):
                if c:
                    nxt[key + (J,)] = nxt.get(key + (J,), 0) + v * c
        out = nxt
    return out


def ks_kernel_check(params: FrameParams, order: int | None = None,
                    cap: int = DEFAULT_SECTOR_CAP) -> Fraction:
    """Max coefficient gap between the two expansions of the kernel K_S.

    Left: Σ_{|M|=S} H_M(x)H_M(y)/M! with H_M built from H_m(λ·).  Right: the
    Pochhammer-weighted sum of plain Hermite products in the ℓd coordinates.
    Both are expanded into monomials in (x, y).
    """
    S = params.S if order is None else order
    p = params.with_S(S)
    k = p.k
    ncoord = p.l * p.d
    lhs: dict[tuple[int, ...], Fraction] = {}
    for M in enumerate_sector(p, cap):
        mono = _monomials([M.coordinate(i, c) for i in range(p.l) for c in range(p.d)])
        w = M.weight
        for a, ca in mono.items():
            for b, cb in mono.items():
                e = sum(a) + sum(b)
                key = a + b
                lhs[key] = lhs.get(key, Fraction(0)) + Fraction(ca * cb, w * k ** (e // 2))
    rhs: dict[tuple[int, ...], Fraction] = {}
    mu = p.mu()
    for s in range(S // 2 + 1):
        coef = pochhammer(mu, s) / math.factorial(s)
        for n in _compositions(S - 2 * s, ncoord):
            mono = _monomials([(nc,) for nc in n])
            c0 = coef / _weight(n)
            for a, ca in mono.items():
                for b, cb in mono.items():
                    key = a + b
                    rhs[key] = rhs.get(key, Fraction(0)) + c0 * ca * cb
    worst = Fraction(0)
    for key in lhs.keys() | rhs.keys():
        worst = max(worst, abs(lhs.get(key, Fraction(0)) - rhs.get(key, Fraction(0))))
    return worst


def t_omega_apply(g: ModeExpansion, omega: complex) -> ModeExpansion:
    """T_ω: multiply the H_m coefficient by ω^{|m|}."""
    if abs(omega) > 1 + 1e-15:
        raise ValueError("T_omega needs |omega| <= 1")
    if g.basis != "hermite-h":
        raise ValueError("T_omega acts on expansions in the H_m basis")
    terms = {m: c * omega ** sum(m) for m, c in g.terms.items()}
    return ModeExpansion("hermite-h", g.dim, terms)


def mehler_closed(omega: float, x, y) -> float:
    x, y = np.atleast_1d(np.asarray(x, float)), np.atleast_1d(np.asarray(y, float))
    d = x.shape[-1]
    w2 = omega * omega
    expo = (-w2 * (np.sum(x * x, -1) + np.sum(y * y, -1)) / (2 * (1 - w2))
            + omega * np.sum(x * y, -1) / (1 - w2))
    return (1 - w2) ** (-d / 2) * np.exp(expo)


def mehler_series(omega: float, truncation: int, x, y) -> float:
    """Σ_{|m| <= T} ω^{|m|} H_m(x)H_m(y)/m!, graded by total degree."""
    x, y = np.atleast_1d(np.asarray(x, float)), np.atleast_1d(np.asarray(y, float))
    n = np.arange(truncation + 1)
    lg = np.array([math.lgamma(v + 1) for v in n])
    # per-coordinate degree series, convolved so only |m| <= T survive
    acc = np.zeros(truncation + 1)
    acc[0] = 1.0
    for xc, yc in zip(x, y):
        a = omega ** n * hermite_eval_vec(n, xc) * hermite_eval_vec(n, yc) / np.exp(lg)
        acc = np.convolve(acc, a)[: truncation + 1]
    return float(acc.sum())


def hermite_eval_vec(n: np.ndarray, x: float) -> np.ndarray:
    return np.array([float(hermite_eval(int(j), x)) for j in n])


def mehler_kernel_check(omega: float, truncation: int, x, y) -> float:
    if not abs(omega) < 1:
        raise ValueError("Mehler kernel needs |omega| < 1")
    return float(abs(mehler_closed(omega, x, y) - mehler_series(omega, truncation, x, y)))


def quarter_shift_identity(nmax: int = 50) -> bool:
    """e^{2πi n(t+1/4)} (-i)^n = e^{2πi n t} for n <= nmax, as Gaussian integers.

    e^{2πi n/4} = i^n, so the claim is i^n (-i)^n = 1; checked by exact
    multiplication of (re, im) integer pairs.
    """
    def mul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    ipow, mipow = (1, 0), (1, 0)
    for n in range(nmax + 1):
        if mul(ipow, mipow) != (1, 0):
            return False
        ipow, mipow = mul(ipow, (0, 1)), mul(mipow, (0, -1))
    return True


# ---------------------------------------------------------------------------
# Strichartz quadratic form


def strichartz_form_hermite(params: FrameParams, alpha: Mapping[tuple, complex]) -> tuple[complex, float]:
    """(⟨φ, Pφ⟩_F, ‖φ‖²_F) for φ(M) = Π α(m^{i,j}), summed over all touched sectors."""
    support = [(tuple(m), complex(c)) for m, c in alpha.items() if c != 0]
    for m, _ in support:
        if len(m) != params.d:
            raise ValueError(f"multi-index {m} is not {params.d}-dimensional")
    mass = sum(abs(c) ** 2 * _weight(m) for m, c in support)
    if not support:
        return 0j, 0.0
    nslot = params.l * params.k
    groups: dict[int, list[tuple[tuple[int, ...], complex]]] = {}
    for combo in itertools.product(range(len(support)), repeat=nslot):
        flat = tuple(v for s in combo for v in support[s][0])
        phi = 1 + 0j
        for s in combo:
            phi *= support[s][1]
        groups.setdefault(sum(flat), []).append((flat, phi))
    form = 0j
    for members in groups.values():
        for fm, pm in members:
            for fn, pn in members:
                P = p_coefficient(fm, fn, params)
                if P:
                    form += pm * np.conj(pn) * float(P)
    return form, float(mass) ** nslot

