"""Free Schrödinger evolution of Hermite and Laguerre modes, and Strichartz functionals.

Modes are Φ_m(x) = H_m(√(4π) x) e^{-π|x|²} on R^d and, for radial data,
Ψ_n(x) = L_n^{(ν)}(2π|x|²) e^{-π|x|²} with ν = d/2 - 1.  The Fourier transform
is f̂(y) = ∫ f(x) e^{-2πi x·y} dx, and e^{itΔ} multiplies f̂ by
e^{-4π²it|y|²}, the sign that reproduces the closed-form mode evolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

from .orthopoly import hermite_eval, laguerre_eval
from .quadrature import gauss_rule, legendre_panels, nodes_for_degree

BASES = ("hermite-phi", "laguerre-psi", "hermite-h", "laguerre-l")


class GridResolutionError(ValueError):
    """The sampling grid cannot resolve the evolved profile."""


class AdmissibilityError(ValueError):
    pass


@dataclass
class ModeExpansion:
    """Finite expansion Σ c·(basis element).  Hermite indices are d-tuples,
    radial Laguerre indices are ints."""

    basis: str
    dim: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}; expected one of {BASES}")
        clean = {}
        for idx, c in dict(self.terms).items():
            if self.basis.startswith("hermite"):
                idx = tuple(int(v) for v in idx)
                if len(idx) != self.dim or min(idx) < 0:
                    raise ValueError(f"bad multi-index {idx} for d={self.dim}")
            else:
                idx = int(idx)
                if idx < 0:
                    raise ValueError("Laguerre index must be >= 0")
            clean[idx] = complex(c)
        self.terms = clean

    @property
    def max_degree(self) -> int:
        if not self.terms:
            return 0
        if self.basis.startswith("hermite"):
            return max(max(m) for m in self.terms)
        return max(self.terms)

    @property
    def max_total_degree(self) -> int:
        if not self.terms:
            return 0
        if self.basis.startswith("hermite"):
            return max(sum(m) for m in self.terms)
        return max(self.terms)

    def with_basis(self, basis: str) -> "ModeExpansion":
        return ModeExpansion(basis, self.dim, dict(self.terms))

    def l2_norm_sq(self) -> float:
        """‖f‖² in L²(dx), from orthogonality of Φ_m / Ψ_n."""
        d = self.dim
        if self.basis == "hermite-phi":
            return 2 ** (-d / 2) * sum(abs(c) ** 2 * _mfact(m) for m, c in self.terms.items())
        if self.basis == "laguerre-psi":
            nu = d / 2 - 1
            return 2 ** (-d / 2) * sum(
                abs(c) ** 2 * math.exp(math.lgamma(n + nu + 1) - math.lgamma(n + 1) - math.lgamma(nu + 1))
                for n, c in self.terms.items()
            )
        raise ValueError("l2_norm_sq is defined for the Φ and Ψ bases")

    def __call__(self, x) -> np.ndarray:
        """Value at t = 0 (points along the last axis)."""
        return self.evolve(0.0, x)

    def evolve(self, t: float, x) -> np.ndarray:
        x = _points(x, self.dim)
        out = np.zeros(x.shape[:-1], dtype=complex)
        if self.basis == "hermite-phi":
            for m, c in self.terms.items():
                out += c * evolve_phi(m, t, x)
        elif self.basis == "laguerre-psi":
            for n, c in self.terms.items():
                out += c * evolve_psi(n, t, x, self.dim)
        else:
            raise ValueError("only Φ/Ψ expansions evolve under e^{itΔ}")
        return out


def _mfact(m) -> int:
    out = 1
    for v in m:
        out *= math.factorial(v)
    return out


def _points(x, d: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if d == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != d:
        raise ValueError(f"points must have last axis of length {d}")
    return x


# ---------------------------------------------------------------------------
# closed forms


def phi_mode(m, x) -> np.ndarray:
    """Φ_m(x) = H_m(√(4π)x) e^{-π|x|²}."""
    m = tuple(m)
    x = _points(x, len(m))
    out = np.exp(-np.pi * np.sum(x * x, axis=-1))
    for c, mc in enumerate(m):
        out = out * hermite_eval(mc, math.sqrt(4 * np.pi) * x[..., c])
    return out


def psi_mode(n: int, r, d: int) -> np.ndarray:
    """Ψ_n as a function of the radius r = |x|."""
    r = np.asarray(r, dtype=float)
    return laguerre_eval(n, d / 2 - 1, 2 * np.pi * r * r) * np.exp(-np.pi * r * r)


def _flow_factors(t: float, d: int):
    z = 1 + 4j * np.pi * t
    rho_sq = 1 + 16 * np.pi**2 * t * t
    pref = z ** (-d / 2)  # principal branch
    ratio = (1 - 4j * np.pi * t) / z
    return pref, ratio, rho_sq


def evolve_phi(m, t: float, x) -> np.ndarray:
    """e^{itΔ}Φ_m at the points x."""
    m = tuple(m)
    d = len(m)
    x = _points(x, d)
    pref, ratio, rho_sq = _flow_factors(t, d)
    root = np.sqrt(ratio)  # principal: e^{-i arctan(4πt)}
    r2 = np.sum(x * x, axis=-1)
    chirp = np.exp(1j * 4 * np.pi**2 * t * r2 / rho_sq)
    return pref * root ** sum(m) * phi_mode(m, x / math.sqrt(rho_sq)) * chirp


def evolve_psi(n: int, t: float, x, d: int) -> np.ndarray:
    """e^{itΔ}Ψ_n at the points x (last axis of length d)."""
    x = _points(x, d)
    return evolve_psi_radial(n, t, np.sqrt(np.sum(x * x, axis=-1)), d)


def evolve_psi_radial(n: int, t: float, r, d: int) -> np.ndarray:
    pref, ratio, rho_sq = _flow_factors(t, d)
    r = np.asarray(r, dtype=float)
    chirp = np.exp(1j * 4 * np.pi**2 * t * r * r / rho_sq)
    return pref * ratio**n * psi_mode(n, r / math.sqrt(rho_sq), d) * chirp


def evolve_gaussian(B: complex, t: float, x, d: int) -> np.ndarray:
    """e^{itΔ} e^{-πB|x|²} = (1+4πiBt)^{-d/2} exp(-πB|x|²/(1+4πiBt))."""
    x = _points(x, d)
    z = 1 + 4j * np.pi * B * t
    return z ** (-d / 2) * np.exp(-np.pi * B * np.sum(x * x, axis=-1) / z)


# ---------------------------------------------------------------------------
# numeric propagator


@dataclass
class SampledProfile:
    """Samples of a function on a quadrature grid.

    ``radial=False``: d = 1, uniform points with spacing ``step``.
    ``radial=True``: samples along the radius with composite Gauss–Legendre
    weights in ``weights``.
    """

    points: np.ndarray
    values: np.ndarray
    dim: int = 1
    radial: bool = False
    weights: np.ndarray | None = None

    @property
    def step(self) -> float:
        return float(self.points[1] - self.points[0])

    @classmethod
    def on_line(cls, func: Callable, extent: float = 80.0, step: float = 0.05) -> "SampledProfile":
        n = int(round(extent / step))
        x = np.arange(-n, n + 1) * step
        return cls(x, np.asarray(func(x), dtype=complex), 1, False)

    @classmethod
    def on_radius(cls, func: Callable, d: int, extent: float = 120.0, panels: int = 240,
                  order: int = 20) -> "SampledProfile":
        r, w = legendre_panels(0.0, extent, panels, order)
        return cls(r, np.asarray(func(r), dtype=complex), d, True, w)

    def mass(self) -> float:
        """∫|f|² dx."""
        if not self.radial:
            return float(np.sum(np.abs(self.values) ** 2) * self.step)
        d = self.dim
        area = 2 * np.pi ** (d / 2) / math.gamma(d / 2)
        return float(area * np.sum(self.weights * np.abs(self.values) ** 2 * self.points ** (d - 1)))


def _spread(points, weights, values) -> float:
    dens = weights * np.abs(values) ** 2
    tot = dens.sum()
    if tot == 0:
        return 0.0
    mean = np.sum(points * dens) / tot
    return float(np.sqrt(np.sum((points - mean) ** 2 * dens) / tot))


def _dft(src_pts, src_vals, src_w, dst_pts, sign: float, chunk: int = 512) -> np.ndarray:
    out = np.empty(len(dst_pts), dtype=complex)
    sv = src_vals * src_w
    for a in range(0, len(dst_pts), chunk):
        y = dst_pts[a:a + chunk]
        out[a:a + chunk] = np.exp(sign * 2j * np.pi * np.outer(y, src_pts)) @ sv
    return out


def _bessel_ratio(nu: float, z: np.ndarray) -> np.ndarray:
    """J_ν(z)/z^ν, continuous at z = 0."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 1e-8
    out[small] = 1.0 / (2**nu * math.gamma(nu + 1))
    zs = z[~small]
    if nu == 0:
        out[~small] = special.j0(zs)
    elif nu == 0.5:
        out[~small] = np.sqrt(2 / np.pi) * np.sin(zs) / zs**1.5
    else:
        out[~small] = special.jv(nu, zs) / zs**nu
    return out


def _hankel(src_pts, src_vals, src_w, dst_pts, nu: float, chunk: int = 256) -> np.ndarray:
    """2π ∫ f(r) [J_ν(2πrs)/(rs)^ν] r^{2ν+1} dr, i.e. the radial Fourier transform."""
    out = np.empty(len(dst_pts), dtype=complex)
    sv = src_vals * src_w * src_pts ** (2 * nu + 1)
    for a in range(0, len(dst_pts), chunk):
        s = dst_pts[a:a + chunk]
        out[a:a + chunk] = 2 * np.pi * (_bessel_ratio(nu, 2 * np.pi * np.outer(s, src_pts)) @ sv)
    return out


def numeric_propagate(f: SampledProfile, t: float, points=None, *,
                      freq_extent: float | None = None, freq_panels: int | None = None) -> SampledProfile:
    """e^{itΔ}f through the Fourier side: transform, multiply by e^{-4π²it|y|²}, invert.

    ``points`` selects where the result is sampled (defaults to the input
    grid).  Raises GridResolutionError if the input grid is too short to hold
    the evolved profile or too coarse for its spectrum.
    """
    out_pts = f.points if points is None else np.asarray(points, dtype=float)
    if not f.radial:
        if f.dim != 1:
            raise ValueError("non-radial propagation is implemented for d = 1")
        h = f.step
        x_ext = float(np.max(np.abs(f.points)))
        Y = 1 / (2 * h) if freq_extent is None else freq_extent
        dy = 1 / (4 * x_ext)
        ny = int(math.ceil(Y / dy))
        y = np.arange(-ny, ny + 1) * dy
        fhat = _dft(f.points, f.values, h, y, -1.0)
        sx = _spread(f.points, np.full(len(f.points), h), f.values)
        sy = _spread(y, np.full(len(y), dy), fhat)
        _check_grid(x_ext, sx, sy, Y, t, np.max(np.abs(out_pts)))
        u = _dft(y, fhat * np.exp(-4j * np.pi**2 * t * y * y), dy, out_pts, 1.0)
        return SampledProfile(out_pts, u, 1, False, None)

    d = f.dim
    nu = d / 2 - 1
    r_ext = float(np.max(f.points))
    Y = 9.0 if freq_extent is None else freq_extent
    # about 16 radians of phase per 20-node panel
    panels = freq_panels or max(80, int(math.ceil(Y * (8 * np.pi * abs(t) * Y + 2 * np.pi * r_ext) / 16)))
    s, ws = legendre_panels(0.0, Y, panels)
    fhat = _hankel(f.points, f.values, f.weights, s, nu)
    area = 2 * np.pi ** (d / 2) / math.gamma(d / 2)
    sx = _spread_radial(f.points, f.weights, f.values, d, area)
    sy = _spread_radial(s, ws, fhat, d, area)
    _check_grid(r_ext, sx, sy, Y, t, np.max(out_pts), radial=True)
    u = _hankel(s, fhat * np.exp(-4j * np.pi**2 * t * s * s), ws, out_pts, nu)
    w_out = f.weights if points is None else None
    return SampledProfile(out_pts, u, d, True, w_out)


def _spread_radial(r, w, vals, d, area) -> float:
    dens = area * w * np.abs(vals) ** 2 * r ** (d - 1)
    tot = dens.sum()
    return float(np.sqrt(np.sum(r * r * dens) / tot)) if tot else 0.0


def _check_grid(x_ext, sx, sy, y_ext, t, out_ext, radial=False):
    if radial:
        # rms radii: <r²>_t <= (σ_x + 4π|t|σ_y)², but the cross term is
        # small for real data, so use the quadrature sum
        need = 6 * math.hypot(sx, 4 * np.pi * t * sy)
    else:
        need = 6 * (sx + 4 * np.pi * abs(t) * sy)
    if x_ext < need:
        raise GridResolutionError(
            f"spatial extent {x_ext:.3g} < {need:.3g} needed to hold the evolved profile"
        )
    if 6 * sy > y_ext:
        raise GridResolutionError(
            f"frequency extent {y_ext:.3g} < 6·σ_y = {6 * sy:.3g}; refine the spatial step"
        )
    if out_ext > x_ext:
        raise GridResolutionError("output points lie outside the sampled region")


# ---------------------------------------------------------------------------
# Strichartz functionals


def sharp_constant(p: float, d: int) -> float:
    """C(p, d) = (p^{-1/2p} 2^{1/p-1/4})^d."""
    if p < 2:
        raise ValueError("need p >= 2")
    return (p ** (-1 / (2 * p)) * 2 ** (1 / p - 0.25)) ** d


def equivalence_constant(p: float, d: int) -> float:
    """(p^{-1/2p} 2^{1/p-1/2})^d, the normaliser relating f and g."""
    return (p ** (-1 / (2 * p)) * 2 ** (1 / p - 0.5)) ** d


def check_admissible(p: float, q: float, d: int, tol: float = 1e-12) -> None:
    if p < 2 or q < 2 or abs(d / p + 2 / q - d / 2) > tol:
        raise AdmissibilityError(f"(p, q, d) = ({p}, {q}, {d}) violates d/p + 2/q = d/2")


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Node counts for the (x, t) quadrature; None picks them from the data.

    With even p the spatial integrand is a polynomial times the Gauss weight,
    so the automatic choice is exact.  Time is integrated in the angle
    θ = arctan(4πt), where the integrand is a π-periodic trigonometric
    polynomial and the midpoint rule is exact once it has enough nodes.
    """

    spatial_nodes: int | None = None
    time_nodes: int | None = None

    def __post_init__(self):
        for v in (self.spatial_nodes, self.time_nodes):
            if v is not None and v < 1:
                raise GridResolutionError("node counts must be positive")


def _even_int(p: float) -> bool:
    return float(p).is_integer() and int(p) % 2 == 0


def _spatial_rule(kind: str, p: float, degree: int, grid: SpaceTimeGrid, nu: float = 0.0):
    if grid.spatial_nodes is not None:
        n = grid.spatial_nodes
    elif _even_int(p):
        n = nodes_for_degree(int(p) * degree)
    else:
        n = max(200, nodes_for_degree(int(math.ceil(p)) * degree) * 4)
    return gauss_rule(kind, n, nu=nu)


def _time_nodes(q: float, degree: int, grid: SpaceTimeGrid) -> int:
    if grid.time_nodes is not None:
        return grid.time_nodes
    return int(math.ceil(q)) * max(degree, 1) + 8 if float(q).is_integer() else 400


def _hermite_lp(alpha: Mapping, phases: np.ndarray, lam: float, p: float, d: int,
                rule) -> np.ndarray:
    """∫|Σ α(m) phase_m H_m(λz)|^p dγ_d(z) for each row of ``phases``.

    ``phases`` has shape (T, len(alpha)); tensor Gauss–Hermite over d axes.
    """
    z, w = rule.nodes, rule.weights
    mesh = np.meshgrid(*([z] * d), indexing="ij")
    wts = np.ones_like(mesh[0])
    for c in range(d):
        wts = wts * np.meshgrid(*([w] * d), indexing="ij")[c]
    wts = wts.ravel()
    basis = []
    for m in alpha:
        v = np.ones(wts.shape)
        for c, mc in enumerate(m):
            v = v * hermite_eval(mc, lam * mesh[c].ravel())
        basis.append(v)
    B = np.array(basis) * np.array(list(alpha.values()))[:, None]
    vals = phases @ B  # (T, npts)
    return np.abs(vals) ** p @ wts


def _laguerre_lp(alpha: Mapping, phases: np.ndarray, scale: float, p: float, rule, nu: float) -> np.ndarray:
    """∫_0^∞ |Σ α(n) phase_n L_n^ν(scale·x)|^p x^ν e^{-x} dx for each phase row."""
    x, w = rule.nodes, rule.weights
    B = np.array([laguerre_eval(n, nu, scale * x) for n in alpha]) * np.array(list(alpha.values()))[:, None]
    vals = phases @ B
    return np.abs(vals) ** p @ w


def spacetime_norm_numeric(f: ModeExpansion, p: float, q: float, grid: SpaceTimeGrid | None = None) -> float:
    """‖e^{itΔ}f‖_{L^q_t L^p_x} over t ∈ R.

    After x = ρy with ρ² = 1+16π²t² and t = tan(θ)/(4π), admissibility makes
    every power of ρ cancel and the norm becomes
    (1/4π) ∫_{-π/2}^{π/2} J(θ)^{q/p} dθ with J the L^p norm of the rotated
    mode sum at t = 0.
    """
    grid = grid or SpaceTimeGrid()
    d = f.dim
    check_admissible(p, q, d)
    if not f.terms:
        return 0.0
    deg = f.max_total_degree
    nt = _time_nodes(q, 2 * deg if f.basis == "laguerre-psi" else deg, grid)
    theta = -np.pi / 2 + (np.arange(nt) + 0.5) * np.pi / nt
    if f.basis == "hermite-phi":
        degs = np.array([sum(m) for m in f.terms])
        phases = np.exp(-1j * np.outer(theta, degs))
        rule = _spatial_rule("hermite", p, f.max_degree, grid)
        J = p ** (-d / 2) * _hermite_lp(f.terms, phases, math.sqrt(2 / p), p, d, rule)
    elif f.basis == "laguerre-psi":
        nu = d / 2 - 1
        degs = np.array(list(f.terms))
        phases = np.exp(-2j * np.outer(theta, degs))
        rule = _spatial_rule("laguerre", p, f.max_degree, grid, nu)
        area = 2 * np.pi ** (d / 2) / math.gamma(d / 2)
        J = area / (2 * (p * np.pi) ** (d / 2)) * _laguerre_lp(f.terms, phases, 2 / p, p, rule, nu)
    else:
        raise ValueError("spacetime norm needs a Φ or Ψ expansion")
    total = np.sum(J ** (q / p)) * (np.pi / nt) / (4 * np.pi)
    return float(total ** (1 / q))


def hermite_time_functional(g: ModeExpansion, p: float, q: float, grid: SpaceTimeGrid | None = None,
                            quarter_turn: bool = True) -> float:
    """(∫_{-1/2}^{1/2} ‖𝓗^t T_{-i} g‖^q_{L^p(dγ)} dt)^{1/q}.

    𝓗^t maps H_m to e^{2πi|m|t} H_m(√(2/p)·); with ``quarter_turn=False`` the
    T_{-i} factor is dropped.
    """
    grid = grid or SpaceTimeGrid()
    if g.basis not in ("hermite-h", "hermite-phi"):
        raise ValueError("need an expansion in H_m coefficients")
    d = g.dim
    deg = g.max_total_degree
    nt = _time_nodes(q, 2 * deg, grid)
    t = -0.5 + (np.arange(nt) + 0.5) / nt
    degs = np.array([sum(m) for m in g.terms])
    phases = np.exp(2j * np.pi * np.outer(t, degs))
    if quarter_turn:
        phases = phases * (-1j) ** degs[None, :]
    rule = _spatial_rule("hermite", p, g.max_degree, grid)
    J = _hermite_lp(g.terms, phases, math.sqrt(2 / p), p, d, rule)
    return float((np.sum(J ** (q / p)) / nt) ** (1 / q))


def equivalence_check_hermite(g: ModeExpansion, p: float, q: float, d: int | None = None,
                              grid: SpaceTimeGrid | None = None) -> tuple[float, float, float]:
    """(lhs, rhs, lhs/rhs) for g = Σα(m)H_m and f = Σα(m)Φ_m.

    lhs is the Gaussian-space time functional, rhs the Strichartz norm of f
    divided by (p^{-1/2p} 2^{1/p-1/2})^d.  Zero data gives ratio 1.
    """
    d = g.dim if d is None else d
    if d != g.dim:
        raise ValueError("dimension mismatch")
    check_admissible(p, q, d)
    lhs = hermite_time_functional(g, p, q, grid)
    f = g.with_basis("hermite-phi")
    rhs = spacetime_norm_numeric(f, p, q, grid) / equivalence_constant(p, d)
    if rhs == 0:
        return lhs, rhs, 1.0 if lhs == 0 else math.inf
    return lhs, rhs, lhs / rhs


def parseval_check(f: ModeExpansion, step: float = 0.02, extent: float = 6.0) -> tuple[float, float]:
    """(∫|f|² dx by the trapezoid rule, 2^{-d/2} Σ|α(m)|² m!)."""
    if f.basis != "hermite-phi":
        raise ValueError("parseval_check takes a Φ expansion")
    d = f.dim
    n = int(round(extent / step))
    axis = np.arange(-n, n + 1) * step
    if d > 3:
        raise ValueError("trapezoid Parseval check supports d <= 3")
    mesh = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1)
    vals = f(mesh)
    lhs = float(np.sum(np.abs(vals) ** 2) * step**d)
    return lhs, f.l2_norm_sq()


def gaussian_quotient(B: complex, p: float, q: float, d: int) -> float:
    """‖e^{itΔ}e^{-πB|x|²}‖_{L^q_t L^p_x} / ‖e^{-πB|x|²}‖_2, spatial integral in closed form."""
    check_admissible(p, q, d)
    if B.real <= 0:
        raise ValueError("need Re B > 0")

    def lp_pow(t):
        z = 1 + 4j * np.pi * B * t
        re_w = (B / z).real
        # ∫|u|^p dx = |z|^{-dp/2} (p Re w)^{-d/2}
        val = abs(z) ** (-d * p / 2) * (p * re_w) ** (-d / 2)
        return val ** (q / p)

    total, _ = sp_integrate.quad(lp_pow, -np.inf, np.inf, epsabs=0, epsrel=1e-12, limit=400)
    norm = (2 * B.real) ** (-d / 4)
    return total ** (1 / q) / norm
