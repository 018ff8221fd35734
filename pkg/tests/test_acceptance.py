"""The twelve acceptance criteria, each at its stated tolerance.

Each test records a one-line verdict (with wall time against the target);
``conftest.py`` prints them in the terminal summary.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from sharpstrichartz import hermite_frame as hf
from sharpstrichartz import laguerre_frame as lf
from sharpstrichartz import schrodinger as sch
from sharpstrichartz import spherical as sph
from sharpstrichartz import words
from sharpstrichartz.checks import random_terms

VERDICTS: dict[int, str] = {}


class Criterion:
    def __init__(self, number: int, title: str, target_s: float):
        self.number, self.title, self.target = number, title, target_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.detail = ""
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        verdict = "PASS" if exc_type is None else "FAIL"
        line = (f"criterion {self.number:2d} {verdict}: {self.title}; {self.detail} "
                f"[{dt:.1f}s, target < {self.target:g}s]")
        VERDICTS[self.number] = line
        print(line)
        return False


def test_01_triple_oracle():
    with Criterion(1, "q_coefficient = q_from_words = q_explicit, N <= 10", 60) as c:
        n = 0
        for a, b, cc, d in itertools.product(range(11), repeat=4):
            if a + b + cc + d > 10:
                continue
            q = lf.q_coefficient(a, b, cc, d)
            assert q == words.q_from_words(a, b, cc, d) == words.q_explicit(a, b, cc, d), (a, b, cc, d)
            n += 1
        c.detail = f"{n} tuples exact"


def test_02_doubly_stochastic():
    with Criterion(2, "Q_S doubly stochastic, positive, Q_S = F^T F, S <= 20", 60) as c:
        for S in range(21):
            Q = lf.assemble_QS(S)
            assert all(s == 1 for s in Q.row_sums())
            assert all(Q[i, j] == Q[j, i] for i in range(S + 1) for j in range(S + 1))
            assert all(v > 0 for row in Q.entries for v in row)
            assert lf.f_factorization(S)[1] == 0
        c.detail = "21 sectors exact"


def test_03_spectrum():
    with Criterion(3, "spectrum in [0,1], simple top eigenvalue 1 on ones, S <= 12", 30) as c:
        worst = 0.0
        for S in range(13):
            rep = lf.spectrum_contract(S, tol=1e-10)
            assert rep.ok, rep
            vals = rep.eigenvalues
            assert all(-1e-10 <= v <= 1 + 1e-10 for v in vals)
            worst = max(worst, abs(vals[0] - 1))
        c.detail = f"max |lambda_1 - 1| = {worst:.1e}"


def test_04_projection_dichotomy():
    with Criterion(4, "idempotent iff mu = 1", 120) as c:
        for kld in [(3, 1, 1), (2, 2, 1), (2, 1, 2)]:
            for S in range(7):
                assert hf.idempotency_defect(hf.FrameParams(*kld, S)) == 0, (kld, S)
        defects = {kld: hf.idempotency_defect(hf.FrameParams(*kld, 2)) for kld in [(2, 1, 3), (2, 1, 4)]}
        assert all(v != 0 for v in defects.values())
        c.detail = "defects at S=2: " + ", ".join(f"{k}: {v}" for k, v in defects.items())


def test_05_norm_law():
    configs = [(2, 1, 3), (3, 1, 2), (2, 1, 4), (7, 1, 1)]  # mu = 3/2, 2, 2, 3
    with Criterion(5, "sector norm = (mu)_{S/2}/(S/2)!, mu in {3/2, 2, 3}, S <= 8", 300) as c:
        worst = 0.0
        for kld in configs:
            params = hf.FrameParams(*kld)
            assert params.mu() in (Fraction(3, 2), 2, 3)
            for S in range(9):
                num, pred = hf.sector_norm(params.with_S(S))
                rel = abs(num - float(pred)) / float(pred)
                assert rel <= 1e-8, (kld, S, num, pred)
                worst = max(worst, rel)
        c.detail = f"max rel err {worst:.1e}"


def test_06_kernel_identity():
    with Criterion(6, "K_S expansions agree exactly, S <= 5", 60) as c:
        for kld in [(2, 1, 2), (3, 1, 1)]:
            for S in range(6):
                assert hf.ks_kernel_check(hf.FrameParams(*kld, S)) == 0, (kld, S)
        c.detail = "12 exact polynomial identities"


def test_07_flow():
    line = np.linspace(-30, 30, 241)
    radius = np.linspace(0, 30, 121)
    with Criterion(7, "closed-form flow = numeric propagator, sup err <= 1e-6", 60) as c:
        worst = 0.0
        for t in (0.1, 1.0):
            for m in range(6):
                f = sch.SampledProfile.on_line(lambda x: sch.phi_mode((m,), x))
                u = sch.numeric_propagate(f, t, line)
                worst = max(worst, float(np.max(np.abs(u.values - sch.evolve_phi((m,), t, line)))))
            for n in range(6):
                f = sch.SampledProfile.on_radius(lambda r: sch.psi_mode(n, r, 2), 2)
                u = sch.numeric_propagate(f, t, radius)
                worst = max(worst, float(np.max(np.abs(u.values - sch.evolve_psi_radial(n, t, radius, 2)))))
        assert worst <= 1e-6
        c.detail = f"sup err {worst:.1e}"


def test_08_gaussian_quotient():
    with Criterion(8, "Gaussian quotients sharp; perturbation margin > 1e-3", 300) as c:
        psi0 = sch.ModeExpansion("laguerre-psi", 2, {0: 1.0})
        phi0 = sch.ModeExpansion("hermite-phi", 1, {(0,): 1.0})
        q442 = sch.spacetime_norm_numeric(psi0, 4, 4) / math.sqrt(psi0.l2_norm_sq())
        q661 = sch.spacetime_norm_numeric(phi0, 6, 6) / math.sqrt(phi0.l2_norm_sq())
        assert abs(q442 - 2 ** -0.5) <= 1e-6
        assert abs(q661 - 12 ** (-1 / 12)) <= 1e-5
        pert442 = sch.ModeExpansion("laguerre-psi", 2, {0: 1.0, 2: 0.3})
        pert661 = sch.ModeExpansion("hermite-phi", 1, {(0,): 1.0, (2,): 0.3})
        m442 = 2 ** -0.5 - sch.spacetime_norm_numeric(pert442, 4, 4) / math.sqrt(pert442.l2_norm_sq())
        m661 = 12 ** (-1 / 12) - sch.spacetime_norm_numeric(pert661, 6, 6) / math.sqrt(pert661.l2_norm_sq())
        assert m442 > 1e-3 and m661 > 1e-3
        c.detail = (f"|q-C| = {abs(q442 - 2 ** -0.5):.1e}, {abs(q661 - 12 ** (-1 / 12)):.1e}; "
                    f"margins {m442:.2e}, {m661:.2e}")


def test_09_equivalence():
    rng = np.random.default_rng(2024)
    with Criterion(9, "Gaussian-space functional / Strichartz norm = 1, random 3-mode data", 120) as c:
        worst = 0.0
        for p, q, d in [(4, 4, 2), (6, 6, 1)]:
            for _ in range(5):
                terms = {tuple(m): complex(re, im) for m, re, im in random_terms(rng, d, 3)}
                _, _, ratio = sch.equivalence_check_hermite(sch.ModeExpansion("hermite-h", d, terms), p, q, d)
                worst = max(worst, abs(ratio - 1))
        assert worst <= 1e-5
        c.detail = f"max |ratio - 1| = {worst:.1e}"


def test_10_funk_hecke():
    with Criterion(10, "Funk-Hecke eigenvalues and exact gap identity", 10) as c:
        worst = 0.0
        for d in (3, 4, 5):
            for n in range(11):
                closed = float(Fraction(d - 2, 2 * n + d - 2)) * sph.sphere_area(d)
                worst = max(worst, abs(sph.funk_hecke_eigenvalue_numeric(n, d) - closed) / closed)
            assert sph.gap_identity_holds(d, 50)
            assert sph.gap_fraction(1, d) == Fraction(2, d)
        assert worst <= 1e-10
        c.detail = f"max rel err {worst:.1e}"


def test_11_weighted_radial():
    with Criterion(11, "weighted space-time equality for the d=3 Gaussian", 60) as c:
        lhs, _ = sph.weighted_spacetime_gaussian_check(3, 1.0)
        target = math.pi * 2 ** -1.5
        rel = abs(lhs - target) / target
        assert rel <= 1e-5
        c.detail = f"rel err {rel:.1e}"


def test_12_parseval():
    rng = np.random.default_rng(7)
    with Criterion(12, "Parseval bridge, random 4-mode data, d in {1, 2}", 10) as c:
        worst = 0.0
        for d in (1, 2):
            for _ in range(5):
                terms = {tuple(m): complex(re, im) for m, re, im in random_terms(rng, d, 4)}
                lhs, rhs = sch.parseval_check(sch.ModeExpansion("hermite-phi", d, terms))
                worst = max(worst, abs(lhs - rhs) / rhs)
        assert worst <= 1e-10
        c.detail = f"max rel err {worst:.1e}"
