"""Gauss-type rules from the Jacobi matrix of the three-term recurrence.

Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix and the
weights are ``mass * v0²`` with ``v0`` the first component of each normalised
eigenvector (Golub–Welsch).  Three weight families are provided:

* ``"hermite"``  -- the standard normal law dγ (mass 1)
* ``"laguerre"`` -- ``x^ν e^{-x}`` on (0, ∞)
* ``"jacobi"``   -- ``(1-u)^α (1+u)^β`` on (-1, 1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import linalg


class QuadratureError(ValueError):
    """Invalid rule parameters."""


class QuadratureConvergenceError(RuntimeError):
    """The tridiagonal eigensolver failed, or a convergence loop stalled."""


@dataclass(frozen=True)
class QuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    params: tuple = ()

    def __len__(self) -> int:
        return len(self.nodes)

    def mass(self) -> float:
        return float(self.weights.sum())


def _recurrence(kind: str, n: int, a: float, b: float):
    """Diagonal, off-diagonal (sqrt of beta_k) and total mass."""
    k = np.arange(n, dtype=float)
    if kind == "hermite":
        diag = np.zeros(n)
        beta = k[1:]
        mass = 1.0
    elif kind == "laguerre":
        nu = a
        diag = 2 * k + nu + 1
        beta = k[1:] * (k[1:] + nu)
        mass = math.gamma(nu + 1)
    elif kind == "jacobi":
        al, be = a, b
        s = al + be
        diag = np.empty(n)
        diag[0] = (be - al) / (s + 2)
        kk = k[1:]
        diag[1:] = (be * be - al * al) / ((2 * kk + s) * (2 * kk + s + 2))
        beta = np.empty(max(n - 1, 0))
        if n > 1:
            beta[0] = 4 * (1 + al) * (1 + be) / ((2 + s) ** 2 * (3 + s))
            kk = k[2:]
            beta[1:] = (
                4 * kk * (kk + al) * (kk + be) * (kk + s)
                / ((2 * kk + s) ** 2 * (2 * kk + s + 1) * (2 * kk + s - 1))
            )
        mass = math.exp(
            (s + 1) * math.log(2)
            + math.lgamma(al + 1)
            + math.lgamma(be + 1)
            - math.lgamma(s + 2)
        )
    else:
        raise QuadratureError(f"unknown rule kind {kind!r}")
    return diag, np.sqrt(beta), mass


@lru_cache(maxsize=256)
def _gauss_rule_cached(kind: str, n: int, a: float, b: float) -> QuadRule:
    diag, off, mass = _recurrence(kind, n, a, b)
    try:
        nodes, vecs = linalg.eigh_tridiagonal(diag, off)
    except linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise QuadratureConvergenceError(f"{kind} rule with n={n}: {exc}") from exc
    weights = mass * vecs[0, :] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    params = {"hermite": (), "laguerre": (a,), "jacobi": (a, b)}[kind]
    return QuadRule(nodes, weights, kind, params)


def gauss_rule(kind: str, n: int, *, nu: float = 0.0, alpha: float = 0.0, beta: float = 0.0) -> QuadRule:
    """n-point Gauss rule; exact for polynomials of degree <= 2n-1."""
    if n < 1:
        raise QuadratureError("need at least one node")
    if kind == "hermite":
        return _gauss_rule_cached(kind, int(n), 0.0, 0.0)
    if kind == "laguerre":
        if nu <= -1:
            raise QuadratureError("laguerre rule needs nu > -1")
        return _gauss_rule_cached(kind, int(n), float(nu), 0.0)
    if kind == "jacobi":
        if alpha <= -1 or beta <= -1:
            raise QuadratureError("jacobi rule needs alpha, beta > -1")
        return _gauss_rule_cached(kind, int(n), float(alpha), float(beta))
    raise QuadratureError(f"unknown rule kind {kind!r}")


def integrate(rule: QuadRule, f: Callable) -> float | complex:
    """Σ w_i f(x_i).  ``f`` must accept the node array."""
    vals = np.asarray(f(rule.nodes))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand is not finite at every node")
    return np.dot(rule.weights, vals)[()]


def nodes_for_degree(D: int) -> int:
    """Node count used for polynomial integrands of degree D (two spare nodes)."""
    return (D + 2) // 2 + 2


def integrate_converged(kind: str, f: Callable, *, n0: int = 200, tol: float = 1e-10,
                        max_nodes: int = 3200, **params) -> float:
    """Double the node count until successive values agree to ``tol`` (relative)."""
    n = n0
    prev = integrate(gauss_rule(kind, n, **params), f)
    while n < max_nodes:
        n *= 2
        cur = integrate(gauss_rule(kind, n, **params), f)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureConvergenceError(f"no convergence up to {max_nodes} nodes")


def legendre_panels(a: float, b: float, panels: int, order: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss–Legendre nodes/weights on [a, b]."""
    rule = gauss_rule("jacobi", order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * rule.nodes[None, :]).ravel()
    weights = (half[:, None] * rule.weights[None, :]).ravel()
    return nodes, weights
