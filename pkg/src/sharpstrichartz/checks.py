"""Verification checks behind the CLI subcommands.

A suite expands a :class:`RunConfig` into an ordered list of
:class:`CheckSpec` (id, function name, keyword arguments).  Every check
function is module level so a process pool can run it; it returns a dict
with ``expected``, ``actual``, ``tolerance`` and ``pass``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import hermite_frame as hf
from . import laguerre_frame as lf
from . import schrodinger as sch
from . import spherical as sph
from . import words

DEFAULT_NORM_CONFIGS = ((2, 1, 3), (4, 1, 1), (3, 1, 2), (5, 1, 1), (2, 1, 4), (7, 1, 1))
PROJECTION_CONFIGS = ((3, 1, 1), (2, 2, 1), (2, 1, 2))
NON_PROJECTION_CONFIGS = ((2, 1, 3), (2, 1, 4), (3, 1, 2))
KS_CONFIGS = ((2, 1, 2), (3, 1, 1))

CAP_ERRORS = (hf.SectorTooLarge, lf.SectorCapExceeded, words.EnumerationCapExceeded)


@dataclass
class RunConfig:
    # caps
    sector_cap: int = hf.DEFAULT_SECTOR_CAP
    word_cap: int = words.DEFAULT_WORD_CAP
    q_cap: int = lf.DEFAULT_Q_CAP
    # grids
    qtable_max_s: int = 8
    spectrum_max_s: int = 12
    words_max_n: int = 8
    proj_max_s: int = 6
    norm_max_s: int = 8
    ks_max_s: int = 5
    fh_max_n: int = 10
    seed: int = 0
    # tolerances
    tol_spectrum: float = 1e-10
    tol_norm: float = 1e-8
    tol_flow: float = 1e-6
    tol_gauss_442: float = 1e-6
    tol_gauss_661: float = 1e-5
    tol_margin: float = 1e-3
    tol_family: float = 1e-5
    tol_equiv: float = 1e-5
    tol_parseval: float = 1e-10
    tol_fh: float = 1e-10
    tol_geg: float = 1e-9
    tol_weighted: float = 1e-5
    # output
    suites: tuple[str, ...] = ()
    format: str = "json"
    out: str | None = None
    jobs: int = 1
    timing: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name.startswith("tol_") and not (isinstance(v, (int, float)) and v > 0):
                raise ValueError(f"{f.name} must be a positive number, got {v!r}")
            if f.name.endswith("_cap") and not (isinstance(v, int) and v > 0):
                raise ValueError(f"{f.name} must be a positive integer, got {v!r}")
            if f.name.startswith(("max", "qtable", "spectrum", "words", "proj", "norm", "ks", "fh")) \
                    and not (isinstance(v, int) and v >= 0):
                raise ValueError(f"{f.name} must be a non-negative integer, got {v!r}")
        if self.format not in ("json", "csv"):
            raise ValueError("format must be json or csv")
        if not isinstance(self.jobs, int) or self.jobs < 1:
            raise ValueError("jobs must be a positive integer")

    @classmethod
    def keys(cls) -> set[str]:
        return {f.name for f in fields(cls)}

    def echo(self) -> dict:
        """Fields that can change results; worker count and output path cannot."""
        out = asdict(self)
        del out["jobs"], out["out"]
        return out


@dataclass(frozen=True)
class CheckSpec:
    id: str
    func: str
    kwargs: dict = field(default_factory=dict)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b) if b else abs(a)


def _result(expected, actual, tolerance, passed: bool, **extra) -> dict:
    out = {"expected": expected, "actual": actual, "tolerance": tolerance, "pass": bool(passed)}
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# Laguerre / words


def q_sector(S: int, q_cap: int) -> dict:
    Q = lf.assemble_QS(S, q_cap)
    sums = Q.row_sums()
    worst = max(abs(s - 1) for s in sums)
    positive = all(v > 0 for row in Q.entries for v in row)
    _, defect = lf.f_factorization(S, q_cap)
    gap = max(worst, defect)
    return _result(Fraction(0), gap, "exact", gap == 0 and positive,
                   detail={"row_sum_defect": worst, "factorization_defect": defect,
                           "entries_positive": positive})


def q_spectrum(S: int, q_cap: int, tol: float) -> dict:
    rep = lf.spectrum_contract(S, tol, q_cap)
    return _result(1.0, rep.eigenvalues[0], tol, rep.ok,
                   detail={"min_eigenvalue": rep.eigenvalues[-1],
                           "second_eigenvalue": rep.eigenvalues[1] if S else None,
                           "top_vector_defect": rep.top_vector_defect})


def words_level(N: int, word_cap: int) -> dict:
    bad = 0
    count = 0
    for a, b, c in itertools.product(range(N + 1), repeat=3):
        d = N - a - b - c
        if d < 0:
            continue
        count += 1
        q1 = lf.q_coefficient(a, b, c, d)
        if not (q1 == words.q_from_words(a, b, c, d, word_cap) == words.q_explicit(a, b, c, d)):
            bad += 1
    return _result(0, bad, "exact", bad == 0, detail={"tuples": count})


# ---------------------------------------------------------------------------
# Hermite frame


def hermite_projection(k: int, l: int, d: int, S: int, sector_cap: int, expect_zero: bool) -> dict:
    defect = hf.idempotency_defect(hf.FrameParams(k, l, d, S), sector_cap)
    if expect_zero:
        return _result(Fraction(0), defect, "exact", defect == 0)
    return _result("> 0", defect, "exact", defect > 0)


def hermite_norm(k: int, l: int, d: int, S: int, sector_cap: int, tol: float) -> dict:
    num, pred = hf.sector_norm(hf.FrameParams(k, l, d, S), sector_cap)
    if pred is None:
        return _result(None, num, tol, True, detail={"note": "no prediction for mu = 1/2"})
    return _result(pred, num, tol, _rel(num, float(pred)) <= tol,
                   detail={"relative_error": _rel(num, float(pred))})


def ks_identity(k: int, l: int, d: int, S: int, sector_cap: int) -> dict:
    defect = hf.ks_kernel_check(hf.FrameParams(k, l, d, S), cap=sector_cap)
    return _result(Fraction(0), defect, "exact", defect == 0)


def mehler(omega: float, truncation: int, tol: float) -> dict:
    err = hf.mehler_kernel_check(omega, truncation, [0.7], [-0.4])
    return _result(0.0, err, tol, err <= tol)


def quarter_shift(nmax: int) -> dict:
    ok = hf.quarter_shift_identity(nmax)
    return _result(True, ok, "exact", ok)


# ---------------------------------------------------------------------------
# Schrödinger flow and Strichartz functionals

_FLOW_POINTS_LINE = np.linspace(-30.0, 30.0, 241)
_FLOW_POINTS_RADIUS = np.linspace(0.0, 30.0, 121)


def flow_phi(m: int, t: float, tol: float) -> dict:
    f = sch.SampledProfile.on_line(lambda x: sch.phi_mode((m,), x))
    u = sch.numeric_propagate(f, t, _FLOW_POINTS_LINE)
    err = float(np.max(np.abs(u.values - sch.evolve_phi((m,), t, _FLOW_POINTS_LINE))))
    return _result(0.0, err, tol, err <= tol)


def flow_psi(n: int, t: float, d: int, tol: float) -> dict:
    f = sch.SampledProfile.on_radius(lambda r: sch.psi_mode(n, r, d), d)
    u = sch.numeric_propagate(f, t, _FLOW_POINTS_RADIUS)
    err = float(np.max(np.abs(u.values - sch.evolve_psi_radial(n, t, _FLOW_POINTS_RADIUS, d))))
    return _result(0.0, err, tol, err <= tol)


def _expansion(basis: str, d: int, terms: list) -> sch.ModeExpansion:
    out = {}
    for idx, re, im in terms:
        out[tuple(idx) if isinstance(idx, (list, tuple)) else idx] = complex(re, im)
    return sch.ModeExpansion(basis, d, out)


def gaussian_quotient_case(basis: str, p: int, q: int, d: int, tol: float) -> dict:
    zero = (0,) * d if basis == "hermite-phi" else 0
    f = sch.ModeExpansion(basis, d, {zero: 1.0})
    ratio = sch.spacetime_norm_numeric(f, p, q) / math.sqrt(f.l2_norm_sq())
    c = sch.sharp_constant(p, d)
    return _result(c, ratio, tol, abs(ratio - c) <= tol)


def perturbed_quotient(basis: str, p: int, q: int, d: int, weight: float, tol: float) -> dict:
    """Gaussian plus a degree-2 mode of the given coefficient; the quotient must drop."""
    if basis == "hermite-phi":
        terms = {(0,) * d: 1.0, (2,) + (0,) * (d - 1): weight}
    else:
        terms = {0: 1.0, 2: weight}
    f = sch.ModeExpansion(basis, d, terms)
    ratio = sch.spacetime_norm_numeric(f, p, q) / math.sqrt(f.l2_norm_sq())
    margin = sch.sharp_constant(p, d) - ratio
    return _result(f"> {tol}", margin, tol, margin > tol, detail={"quotient": ratio})


def maximizer_family(B_re: float, B_im: float, p: int, q: int, d: int, tol: float) -> dict:
    ratio = sch.gaussian_quotient(complex(B_re, B_im), p, q, d)
    c = sch.sharp_constant(p, d)
    return _result(c, ratio, tol, _rel(ratio, c) <= tol)


def laguerre_form_agreement(terms: list, tol: float) -> dict:
    alpha = [complex(re, im) for re, im in terms]
    f = sch.ModeExpansion("laguerre-psi", 2, dict(enumerate(alpha)))
    form = lf.strichartz_form_laguerre(alpha)[0] ** 0.25
    norm = sch.spacetime_norm_numeric(f, 4, 4)
    return _result(form, norm, tol, _rel(norm, form) <= tol)


def hermite_form_agreement(terms: list, tol: float) -> dict:
    alpha = {tuple(idx): complex(re, im) for idx, re, im in terms}
    form, _ = hf.strichartz_form_hermite(hf.FrameParams(2, 1, 2), alpha)
    rotated = {m: (1j) ** sum(m) * c for m, c in alpha.items()}
    f = sch.ModeExpansion("hermite-phi", 2, rotated)
    numeric = (sch.spacetime_norm_numeric(f, 4, 4) / sch.equivalence_constant(4, 2)) ** 4
    return _result(form.real, numeric, tol, _rel(numeric, form.real) <= tol)


def equivalence_case(p: int, q: int, d: int, terms: list, tol: float) -> dict:
    g = _expansion("hermite-h", d, terms)
    lhs, rhs, ratio = sch.equivalence_check_hermite(g, p, q, d)
    return _result(1.0, ratio, tol, abs(ratio - 1) <= tol, detail={"lhs": lhs, "rhs": rhs})


def parseval_case(d: int, terms: list, tol: float) -> dict:
    f = _expansion("hermite-phi", d, terms)
    lhs, rhs = sch.parseval_check(f)
    return _result(rhs, lhs, tol, _rel(lhs, rhs) <= tol)


def random_terms(rng: np.random.Generator, d: int, count: int, max_entry: int = 3) -> list:
    seen: list[tuple] = []
    while len(seen) < count:
        m = tuple(int(v) for v in rng.integers(0, max_entry + 1, size=d))
        if m not in seen:
            seen.append(m)
    return [[list(m), float(rng.normal()), float(rng.normal())] for m in seen]


# ---------------------------------------------------------------------------
# spherical


def funk_hecke_case(n: int, d: int, tol: float) -> dict:
    frac, _ = sph.funk_hecke_eigenvalue_closed(n, d)
    closed = float(frac) * sph.sphere_area(d)
    num = sph.funk_hecke_eigenvalue_numeric(n, d)
    return _result(closed, num, tol, _rel(num, closed) <= tol, detail={"rational_part": frac})


def gap_case(d: int, nmax: int) -> dict:
    ok = sph.gap_identity_holds(d, nmax)
    return _result(Fraction(2, d), sph.gap_fraction(1, d), "exact", ok)


def gegenbauer_case(n: int, nu: str, a: str, tol: float) -> dict:
    lhs, rhs = sph.gegenbauer_moment_check(n, float(Fraction(nu)), float(Fraction(a)))
    return _result(rhs, lhs, tol, abs(lhs - rhs) <= tol * max(abs(rhs), 1e-300) or lhs == rhs)


def weighted_gaussian(d: int, B: float, tol: float) -> dict:
    lhs, rhs = sph.weighted_spacetime_gaussian_check(d, B)
    return _result(rhs, lhs, tol, _rel(lhs, rhs) <= tol)


def zonal_form(d: int, coeffs: list, equality: bool, tol: float) -> dict:
    wf = sph.weighted_form(sph.ZonalExpansion(d, coeffs))
    slack = wf.bound - wf.form
    scale = max(abs(wf.bound), 1.0)
    if equality:
        return _result(wf.bound, wf.form, tol, abs(slack) <= tol * scale)
    return _result(f"< {wf.bound!r}", wf.form, tol, slack > tol * scale)


def dipole_case(terms: list, equality: bool, tol: float) -> dict:
    f = _expansion("hermite-phi", 3, terms)
    r = sph.weighted_spacetime_check(f)
    slack = r.sharp_bound - r.lhs
    if equality:
        return _result(r.sharp_bound, r.lhs, tol, abs(slack) <= tol * r.sharp_bound,
                       detail={"dist2": r.dist2})
    return _result(f"< {r.sharp_bound!r}", r.lhs, tol, slack > tol * r.sharp_bound,
                   detail={"dist2": r.dist2})


CHECKS: dict[str, Callable[..., dict]] = {
    f.__name__: f
    for f in (q_sector, q_spectrum, words_level, hermite_projection, hermite_norm, ks_identity,
              mehler, quarter_shift, flow_phi, flow_psi, gaussian_quotient_case, perturbed_quotient,
              maximizer_family, laguerre_form_agreement, hermite_form_agreement, equivalence_case,
              parseval_case, funk_hecke_case, gap_case, gegenbauer_case, weighted_gaussian,
              zonal_form, dipole_case)
}


def run_spec(spec: CheckSpec) -> dict:
    return CHECKS[spec.func](**spec.kwargs)


# ---------------------------------------------------------------------------
# suites


def suite_qtable(cfg: RunConfig) -> list[CheckSpec]:
    specs = [CheckSpec(f"qtable/S={S}", "q_sector", {"S": S, "q_cap": cfg.q_cap})
             for S in range(cfg.qtable_max_s + 1)]
    specs += [CheckSpec(f"qtable/spectrum/S={S}", "q_spectrum",
                        {"S": S, "q_cap": cfg.q_cap, "tol": cfg.tol_spectrum})
              for S in range(min(cfg.qtable_max_s, cfg.spectrum_max_s) + 1)]
    return specs


def suite_words(cfg: RunConfig) -> list[CheckSpec]:
    return [CheckSpec(f"words/N={N}", "words_level", {"N": N, "word_cap": cfg.word_cap})
            for N in range(cfg.words_max_n + 1)]


def suite_hermite_proj(cfg: RunConfig) -> list[CheckSpec]:
    specs = []
    for k, l, d in PROJECTION_CONFIGS:
        for S in range(cfg.proj_max_s + 1):
            specs.append(CheckSpec(f"hermite-proj/{k},{l},{d}/S={S}", "hermite_projection",
                                   dict(k=k, l=l, d=d, S=S, sector_cap=cfg.sector_cap, expect_zero=True)))
    for k, l, d in NON_PROJECTION_CONFIGS:
        specs.append(CheckSpec(f"hermite-proj/{k},{l},{d}/S=2", "hermite_projection",
                               dict(k=k, l=l, d=d, S=2, sector_cap=cfg.sector_cap, expect_zero=False)))
    return specs


def suite_hermite_norm(cfg: RunConfig) -> list[CheckSpec]:
    return [CheckSpec(f"hermite-norm/{k},{l},{d}/S={S}", "hermite_norm",
                      dict(k=k, l=l, d=d, S=S, sector_cap=cfg.sector_cap, tol=cfg.tol_norm))
            for k, l, d in DEFAULT_NORM_CONFIGS for S in range(cfg.norm_max_s + 1)]


def suite_ks(cfg: RunConfig) -> list[CheckSpec]:
    specs = [CheckSpec(f"ks-check/{k},{l},{d}/S={S}", "ks_identity",
                       dict(k=k, l=l, d=d, S=S, sector_cap=cfg.sector_cap))
             for k, l, d in KS_CONFIGS for S in range(cfg.ks_max_s + 1)]
    specs.append(CheckSpec("ks-check/mehler", "mehler", dict(omega=0.3, truncation=30, tol=1e-10)))
    specs.append(CheckSpec("ks-check/quarter-shift", "quarter_shift", dict(nmax=50)))
    return specs


def suite_flow(cfg: RunConfig) -> list[CheckSpec]:
    specs = [CheckSpec(f"flow/phi/m={m}/t={t}", "flow_phi", dict(m=m, t=t, tol=cfg.tol_flow))
             for m in range(6) for t in (0.1, 1.0)]
    specs += [CheckSpec(f"flow/psi/d=2/n={n}/t={t}", "flow_psi", dict(n=n, t=t, d=2, tol=cfg.tol_flow))
              for n in range(6) for t in (0.1, 1.0)]
    return specs


def suite_strichartz(cfg: RunConfig) -> list[CheckSpec]:
    rng = np.random.default_rng(cfg.seed)
    specs = [
        CheckSpec("strichartz/gauss/4,4,2", "gaussian_quotient_case",
                  dict(basis="laguerre-psi", p=4, q=4, d=2, tol=cfg.tol_gauss_442)),
        CheckSpec("strichartz/gauss/6,6,1", "gaussian_quotient_case",
                  dict(basis="hermite-phi", p=6, q=6, d=1, tol=cfg.tol_gauss_661)),
        CheckSpec("strichartz/perturbed/4,4,2", "perturbed_quotient",
                  dict(basis="laguerre-psi", p=4, q=4, d=2, weight=0.3, tol=cfg.tol_margin)),
        CheckSpec("strichartz/perturbed/6,6,1", "perturbed_quotient",
                  dict(basis="hermite-phi", p=6, q=6, d=1, weight=0.3, tol=cfg.tol_margin)),
    ]
    for B in ((1.0, 0.0), (2.5, 0.0), (0.3, 1.0), (1.0, -2.0)):
        specs.append(CheckSpec(f"strichartz/family/4,4,2/B={complex(*B)}", "maximizer_family",
                               dict(B_re=B[0], B_im=B[1], p=4, q=4, d=2, tol=cfg.tol_family)))
    lag = [[float(rng.normal()), float(rng.normal())] for _ in range(3)]
    specs.append(CheckSpec("strichartz/laguerre-form", "laguerre_form_agreement",
                           dict(terms=lag, tol=1e-6)))
    specs.append(CheckSpec("strichartz/hermite-form", "hermite_form_agreement",
                           dict(terms=random_terms(rng, 2, 3, 2), tol=1e-6)))
    return specs


def suite_equivalence(cfg: RunConfig) -> list[CheckSpec]:
    rng = np.random.default_rng(cfg.seed + 1)
    specs = []
    for p, q, d in ((4, 4, 2), (6, 6, 1)):
        for trial in range(3):
            specs.append(CheckSpec(f"equivalence/{p},{q},{d}/#{trial}", "equivalence_case",
                                   dict(p=p, q=q, d=d, terms=random_terms(rng, d, 3), tol=cfg.tol_equiv)))
    for d in (1, 2):
        for trial in range(3):
            specs.append(CheckSpec(f"parseval/d={d}/#{trial}", "parseval_case",
                                   dict(d=d, terms=random_terms(rng, d, 4), tol=cfg.tol_parseval)))
    return specs


def suite_funk_hecke(cfg: RunConfig) -> list[CheckSpec]:
    specs = [CheckSpec(f"funk-hecke/d={d}/n={n}", "funk_hecke_case", dict(n=n, d=d, tol=cfg.tol_fh))
             for d in (3, 4, 5) for n in range(cfg.fh_max_n + 1)]
    specs += [CheckSpec(f"funk-hecke/gap/d={d}", "gap_case", dict(d=d, nmax=50)) for d in (3, 4, 5)]
    for nu in ("1/2", "1", "3/2"):
        for a in ("1/4", nu):
            for n in range(9):
                specs.append(CheckSpec(f"gegenbauer/nu={nu}/a={a}/n={n}", "gegenbauer_case",
                                       dict(n=n, nu=nu, a=a, tol=cfg.tol_geg)))
    return specs


def suite_weighted(cfg: RunConfig) -> list[CheckSpec]:
    tol = cfg.tol_weighted
    specs = [
        CheckSpec("weighted/gaussian/d=3", "weighted_gaussian", dict(d=3, B=1.0, tol=tol)),
        CheckSpec("weighted/gaussian/d=3/B=2", "weighted_gaussian", dict(d=3, B=2.0, tol=tol)),
        CheckSpec("weighted/zonal/const", "zonal_form", dict(d=3, coeffs=[1.0], equality=True, tol=1e-12)),
        CheckSpec("weighted/zonal/Y1", "zonal_form", dict(d=3, coeffs=[0.0, 1.0], equality=True, tol=1e-12)),
        CheckSpec("weighted/zonal/Y2", "zonal_form", dict(d=3, coeffs=[0.0, 0.0, 1.0], equality=False, tol=1e-12)),
        CheckSpec("weighted/dipole", "dipole_case",
                  dict(terms=[[[0, 0, 0], 1.0, 0.0], [[1, 0, 0], 0.4, 0.0]], equality=True, tol=tol)),
        CheckSpec("weighted/quadrupole", "dipole_case",
                  dict(terms=[[[0, 0, 0], 1.0, 0.0], [[1, 1, 0], 0.4, 0.0]], equality=False, tol=tol)),
    ]
    return specs


SUITES: dict[str, Callable[[RunConfig], list[CheckSpec]]] = {
    "qtable": suite_qtable,
    "words-check": suite_words,
    "hermite-proj": suite_hermite_proj,
    "hermite-norm": suite_hermite_norm,
    "ks-check": suite_ks,
    "flow-check": suite_flow,
    "strichartz": suite_strichartz,
    "equivalence": suite_equivalence,
    "funk-hecke": suite_funk_hecke,
    "weighted": suite_weighted,
}


# ---------------------------------------------------------------------------
# tables


def qtable_rows(max_s: int, q_cap: int) -> list[dict[str, Any]]:
    rows = []
    for S in range(max_s + 1):
        Q = lf.assemble_QS(S, q_cap)
        sums = Q.row_sums()
        for a in range(S + 1):
            for c in range(S + 1):
                v = Q[a, c]
                rows.append({"S": S, "a": a, "c": c, "value": str(v),
                             "decimal": format(float(v), ".17g"), "exact": True,
                             "row_sum": str(sums[a])})
    return rows


def words_rows(max_n: int, word_cap: int) -> list[dict[str, Any]]:
    rows = []
    for N in range(max_n + 1):
        for a, b, c in itertools.product(range(N + 1), repeat=3):
            d = N - a - b - c
            if d < 0:
                continue
            qi = lf.q_coefficient(a, b, c, d)
            qw = words.q_from_words(a, b, c, d, word_cap)
            qe = words.q_explicit(a, b, c, d)
            rows.append({"a": a, "b": b, "c": c, "d": d,
                         "signed_count": words.signed_count(a, b, c, d, word_cap),
                         "q_value": str(qi),
                         "decimal": format(float(qi), ".17g"),
                         "matches_integral": qw == qi and qe == qi})
    return rows


def funk_hecke_rows(max_n: int) -> list[dict[str, Any]]:
    rows = []
    for d in (3, 4, 5):
        for n in range(max_n + 1):
            frac, _ = sph.funk_hecke_eigenvalue_closed(n, d)
            rows.append({"d": d, "n": n, "rational_part": str(frac),
                         "closed": format(float(frac) * sph.sphere_area(d), ".17g"),
                         "numeric": format(sph.funk_hecke_eigenvalue_numeric(n, d), ".17g")})
    return rows


TABLES: dict[str, Callable[[RunConfig], list[dict]]] = {
    "qtable": lambda cfg: qtable_rows(cfg.qtable_max_s, cfg.q_cap),
    "words-check": lambda cfg: words_rows(cfg.words_max_n, cfg.word_cap),
    "funk-hecke": lambda cfg: funk_hecke_rows(cfg.fh_max_n),
}
