"""Funk–Hecke spectrum of the sphere operator R and the weighted space-time estimate.

R(g)(ξ) = ∫_{S^{d-1}} g(ζ) |ξ - ζ|^{2-d} dζ acts on degree-n spherical
harmonics as the scalar ((d-2)/(2n+d-2))|S^{d-1}|.  Zonal expansions
g(ξ) = Σ c_n C_n^ν(ξ·e) with ν = d/2 - 1 carry all of that spectral content.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy import special

from .orthopoly import gegenbauer_eval, hermite_eval, laguerre_eval
from .quadrature import gauss_rule, integrate, nodes_for_degree
from .schrodinger import ModeExpansion, evolve_gaussian


def sphere_area(d: int) -> float:
    """|S^{d-1}| = 2π^{d/2}/Γ(d/2), the surface area of the unit sphere in R^d."""
    return 2 * math.exp(d / 2 * math.log(math.pi) - math.lgamma(d / 2))


@dataclass(frozen=True)
class SphereConstants:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def surface_area(self) -> float:
        return sphere_area(self.d)

    @property
    def nu(self) -> Fraction:
        return Fraction(self.d, 2) - 1


def _require_d(d: int) -> None:
    if d < 3:
        raise ValueError("the sphere operator R needs d >= 3")


# ---------------------------------------------------------------------------
# Funk–Hecke


def funk_hecke_eigenvalue_numeric(n: int, d: int) -> float:
    """(|S^{d-2}|/(2^ν C_n^ν(1))) ∫ C_n^ν(u)(1-u)^{-ν}(1-u²)^{ν-1/2} du by Gauss–Jacobi.

    The weight (1-u)^{-1/2}(1+u)^{ν-1/2} absorbs every singular factor, leaving
    C_n^ν as the integrand, so n//2 + 2 nodes are already exact.
    """
    _require_d(d)
    nu = d / 2 - 1
    rule = gauss_rule("jacobi", nodes_for_degree(n), alpha=-0.5, beta=nu - 0.5)
    integral = integrate(rule, lambda u: gegenbauer_eval(n, nu, u))
    c1 = float(gegenbauer_eval(n, nu, 1.0))
    return sphere_area(d - 1) / (2**nu * c1) * float(integral)


def funk_hecke_eigenvalue_closed(n: int, d: int) -> tuple[Fraction, bool]:
    """((d-2)/(2n+d-2), True): the eigenvalue as a multiple of |S^{d-1}|."""
    _require_d(d)
    if n < 0:
        raise ValueError("degree must be >= 0")
    return Fraction(d - 2, 2 * n + d - 2), True


def gap_fraction(n: int, d: int) -> Fraction:
    """1 - eigenvalue(n)/|S^{d-1}| = 2n/(2n+d-2)."""
    return 1 - funk_hecke_eigenvalue_closed(n, d)[0]


def gap_identity_holds(d: int, nmax: int = 50) -> bool:
    """2n/(2n+d-2) >= 2/d for 1 <= n <= nmax, with equality only at n = 1 (exact)."""
    sharp = Fraction(2, d)
    for n in range(1, nmax + 1):
        g = gap_fraction(n, d)
        if g < sharp or (g == sharp) != (n == 1):
            return False
    return True


def gegenbauer_moment_check(n: int, nu, a) -> tuple[float, float]:
    """Both sides of the weighted Gegenbauer moment formula.

    lhs = (1/C_n^ν(1)) ∫ C_n^ν(u)(1-u)^{-a}(1-u²)^{ν-1/2} du by Gauss–Jacobi;
    rhs = 2^{2ν-a} Γ(ν+1/2) Γ(ν+1/2-a) (a)_n / Γ(2ν+n+1-a), where the
    Pochhammer symbol (a)_n replaces Γ(n+a)/Γ(a) so a <= 0 needs no limit.
    """
    nu, a = float(nu), float(a)
    if nu <= -0.5:
        raise ValueError("need nu > -1/2")
    if a >= nu + 0.5:
        raise ValueError("need a < nu + 1/2")
    if nu == 0:
        raise ValueError("nu = 0 is the Chebyshev limit; not supported")
    rule = gauss_rule("jacobi", nodes_for_degree(n), alpha=nu - 0.5 - a, beta=nu - 0.5)
    lhs = float(integrate(rule, lambda u: gegenbauer_eval(n, nu, u))) / float(gegenbauer_eval(n, nu, 1.0))
    log_mag = ((2 * nu - a) * math.log(2) + math.lgamma(nu + 0.5) + math.lgamma(nu + 0.5 - a)
               - math.lgamma(2 * nu + n + 1 - a))
    rhs = math.exp(log_mag) * float(special.poch(a, n))
    return lhs, rhs


# ---------------------------------------------------------------------------
# zonal quadratic form


@dataclass
class ZonalExpansion:
    """g(ξ) = Σ_n coeffs[n] · C_n^ν(ξ·e) on S^{d-1}."""

    d: int
    coeffs: Sequence[complex]

    def __post_init__(self):
        _require_d(self.d)
        self.coeffs = [complex(c) for c in self.coeffs]

    @property
    def nu(self) -> float:
        return self.d / 2 - 1

    def component_norms_sq(self) -> np.ndarray:
        """‖Y_n‖² = |c_n|² |S^{d-2}| h_n, h_n = π 2^{1-2ν} Γ(n+2ν)/(n!(n+ν)Γ(ν)²)."""
        nu = self.nu
        area = sphere_area(self.d - 1)
        out = []
        for n, c in enumerate(self.coeffs):
            log_h = (math.log(math.pi) + (1 - 2 * nu) * math.log(2) + math.lgamma(n + 2 * nu)
                     - math.lgamma(n + 1) - math.log(n + nu) - 2 * math.lgamma(nu))
            out.append(abs(c) ** 2 * area * math.exp(log_h))
        return np.array(out)

    def __call__(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return sum(c * gegenbauer_eval(n, self.nu, u) for n, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class WeightedForm:
    form: float
    bound: float
    dist2: float
    plain_bound: float

    @property
    def slack(self) -> float:
        return self.bound - self.form


def weighted_form(g: ZonalExpansion) -> WeightedForm:
    """⟨g, Rg⟩ against the sharpened bound |S|(‖g‖² - (2/d) Dist(g, Const)²).

    The sharpened bound is attained exactly when g has no components of
    degree >= 2; the plain bound |S|‖g‖² only for constants.
    """
    d = g.d
    area = sphere_area(d)
    norms = g.component_norms_sq()
    eig = np.array([float(funk_hecke_eigenvalue_closed(n, d)[0]) for n in range(len(norms))])
    form = area * float(np.dot(eig, norms))
    total = float(norms.sum())
    dist2 = float(norms[1:].sum())
    return WeightedForm(form, area * (total - 2 / d * dist2), dist2, area * total)


def weighted_form_quadrature(g: ZonalExpansion) -> float:
    """⟨g, Rg⟩ recomputed as |S^{d-2}| ∫ g(u) conj(Rg)(u) (1-u²)^{ν-1/2} du.

    Rg is applied termwise with the numeric Funk–Hecke eigenvalues, so this
    only shares the orthogonality of Gegenbauer polynomials with
    :func:`weighted_form`.
    """
    d, nu = g.d, g.nu
    N = len(g.coeffs)
    rule = gauss_rule("jacobi", nodes_for_degree(2 * N), alpha=nu - 0.5, beta=nu - 0.5)
    u = rule.nodes
    gv = g(u)
    rg = sum(c * funk_hecke_eigenvalue_numeric(n, d) * gegenbauer_eval(n, nu, u)
             for n, c in enumerate(g.coeffs))
    return float(np.real(sphere_area(d - 1) * np.dot(rule.weights, gv * np.conj(rg))))


# ---------------------------------------------------------------------------
# weighted space-time integrals


def _theta_grid(nt: int) -> tuple[np.ndarray, float]:
    theta = -np.pi / 2 + (np.arange(nt) + 0.5) * np.pi / nt
    return theta, np.pi / nt


def weighted_spacetime_gaussian_check(d: int = 3, B: float = 1.0, nt: int = 64,
                                      nr: int = 40) -> tuple[float, float]:
    """(∫∫|e^{itΔ}f|² |x|^{-2} dx dt, (π/(d-2))‖f‖²) for f = e^{-πB|x|²}.

    The evolved Gaussian is evaluated from its closed form on an (r, θ) grid
    with t = tan(θ)/(4πB); the radial integral uses Gauss–Laguerre nodes in
    s = 2πB r²/ρ² with weight s^{d/2-2} e^{-s}.
    """
    _require_d(d)
    if B <= 0:
        raise ValueError("need B > 0")
    area = sphere_area(d)
    rule = gauss_rule("laguerre", nr, nu=d / 2 - 2)
    theta, dtheta = _theta_grid(nt)
    total = 0.0
    for th in theta:
        t = math.tan(th) / (4 * np.pi * B)
        rho2 = 1 + math.tan(th) ** 2
        scale = 2 * np.pi * B / rho2
        r = np.sqrt(rule.nodes / scale)
        pts = np.zeros((len(r), d))
        pts[:, 0] = r
        u = evolve_gaussian(B, t, pts, d)
        # |x|^{-2} r^{d-1} dr = (1/2) scale^{1-d/2} s^{d/2-2} ds, weight e^{-s} divided out
        vals = np.abs(u) ** 2 * np.exp(rule.nodes)
        spatial = area * 0.5 * scale ** (1 - d / 2) * float(np.dot(rule.weights, vals))
        total += spatial * rho2 / (4 * np.pi * B) * dtheta
    rhs = np.pi / (d - 2) * (2 * B) ** (-d / 2)
    return total, rhs


def _sphere_rule(d: int, degree: int):
    """Product rule on S^2, exact for polynomials of the given degree."""
    if d != 3:
        raise ValueError("sphere product quadrature is implemented for d = 3")
    leg = gauss_rule("jacobi", nodes_for_degree(degree))
    nphi = 2 * (degree // 2 + 2)  # even, so antipodal symmetry is exact
    phi = 2 * np.pi * np.arange(nphi) / nphi
    ct = leg.nodes[:, None]
    st = np.sqrt(1 - ct**2)
    dirs = np.stack([st * np.cos(phi), st * np.sin(phi), np.broadcast_to(ct, (len(ct), nphi))], -1).reshape(-1, 3)
    w = (leg.weights[:, None] * np.full(nphi, 2 * np.pi / nphi)[None, :]).ravel()
    return dirs, w


@dataclass(frozen=True)
class WeightedSpaceTime:
    lhs: float
    sharp_bound: float
    plain_bound: float
    norm_sq: float
    dist2: float


def weighted_spacetime_check(f: ModeExpansion, nt: int | None = None) -> WeightedSpaceTime:
    """Weighted space-time integral of e^{itΔ}f for a Φ expansion in d = 3.

    With x = ρy and t = tan(θ)/(4π) the integral becomes
    (1/4π) ∫ dθ ∫ |Σ α(m) e^{-i|m|θ} Φ_m(y)|² |y|^{-2} dy.  The y integral
    uses radial Gauss–Laguerre (weight s^{-1/2}e^{-s}, s = 2π|y|²) times an
    exact product rule on the sphere.  Dist(f, Radial)² comes from the
    spherical mean at each radius.
    """
    if f.basis != "hermite-phi" or f.dim != 3:
        raise ValueError("weighted_spacetime_check takes a 3-d Φ expansion")
    d = 3
    D = f.max_total_degree
    rule = gauss_rule("laguerre", nodes_for_degree(2 * D) + 2, nu=-0.5)
    dirs, wdir = _sphere_rule(d, 2 * D)
    r = np.sqrt(rule.nodes / (2 * np.pi))
    pts = r[:, None, None] * dirs[None, :, :]  # (nr, ndir, 3)
    idx = list(f.terms)
    coef = np.array([f.terms[m] for m in idx])
    degs = np.array([sum(m) for m in idx])
    poly = []
    for m in idx:
        v = np.ones(pts.shape[:2])
        for c, mc in enumerate(m):
            v = v * hermite_eval(mc, math.sqrt(4 * np.pi) * pts[..., c])
        poly.append(v)
    poly = np.array(poly)  # Φ_m without the Gaussian factor
    nt = nt or 2 * D + 8
    theta, dtheta = _theta_grid(nt)
    # ∫ F(y)|y|^{-2} dy with F = e^{-2π|y|²}P: radial measure r^{d-3} dr = (1/2)(2π)^{-1/2} s^{-1/2} ds
    rad = 0.5 * (2 * np.pi) ** -0.5
    lhs = 0.0
    for th in theta:
        vals = np.tensordot(coef * np.exp(-1j * degs * th), poly, axes=1)
        lhs += rad * float(rule.weights @ (np.abs(vals) ** 2 @ wdir)) * dtheta / (4 * np.pi)
    # ‖f‖² and the radial projection need r^{d-1} dr = (1/2)(2π)^{-3/2} s^{1/2} ds
    rule2 = gauss_rule("laguerre", nodes_for_degree(2 * D) + 2, nu=0.5)
    r2 = np.sqrt(rule2.nodes / (2 * np.pi))
    pts2 = r2[:, None, None] * dirs[None, :, :]
    vals2 = np.zeros(pts2.shape[:2], dtype=complex)
    for m, c in f.terms.items():
        v = np.ones(pts2.shape[:2])
        for k, mc in enumerate(m):
            v = v * hermite_eval(mc, math.sqrt(4 * np.pi) * pts2[..., k])
        vals2 += c * v
    rad2 = 0.5 * (2 * np.pi) ** -1.5
    norm_sq = rad2 * float(rule2.weights @ (np.abs(vals2) ** 2 @ wdir))
    area = sphere_area(d)
    mean = (vals2 @ wdir) / area
    radial_sq = rad2 * area * float(rule2.weights @ np.abs(mean) ** 2)
    dist2 = norm_sq - radial_sq
    c = np.pi / (d - 2)
    return WeightedSpaceTime(lhs, c * (norm_sq - 2 / d * dist2), c * norm_sq, norm_sq, dist2)


def weighted_spacetime_radial(f: ModeExpansion, nt: int | None = None) -> tuple[float, float]:
    """(weighted space-time integral, (π/(d-2))‖f‖²) for a Ψ expansion, d >= 3."""
    if f.basis != "laguerre-psi":
        raise ValueError("need a Ψ expansion")
    d = f.dim
    _require_d(d)
    nu = d / 2 - 1
    D = f.max_degree
    rule = gauss_rule("laguerre", nodes_for_degree(2 * D) + 2, nu=d / 2 - 2)
    x = rule.nodes
    idx = list(f.terms)
    coef = np.array([f.terms[n] for n in idx])
    basis = np.array([laguerre_eval(n, nu, x) for n in idx])
    nt = nt or 4 * D + 8
    theta, dtheta = _theta_grid(nt)
    # |x|^{-2} dx over R^d with s = 2π r²: |S| (1/2)(2π)^{1-d/2} s^{d/2-2} ds
    pref = sphere_area(d) * 0.5 * (2 * np.pi) ** (1 - d / 2)
    lhs = 0.0
    for th in theta:
        vals = (coef * np.exp(-2j * np.array(idx) * th)) @ basis
        lhs += pref * float(rule.weights @ np.abs(vals) ** 2) * dtheta / (4 * np.pi)
    return lhs, np.pi / (d - 2) * f.l2_norm_sq()
