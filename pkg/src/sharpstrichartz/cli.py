"""``sharpstrichartz`` command line.

Exit codes: 0 all checks pass, 1 some check failed, 2 bad configuration,
3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import __version__
from .checks import CAP_ERRORS, SUITES, TABLES, CheckSpec, RunConfig, run_spec
from .report import CheckRecord, Report

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAP = 0, 1, 2, 3

# subcommand-specific flags: (flag, config key, type, help)
_EXTRA = {
    "qtable": [("--max-s", "qtable_max_s", int, "largest sector S")],
    "words-check": [("--max-n", "words_max_n", int, "largest total degree N")],
    "hermite-proj": [("--max-s", "proj_max_s", int, "largest sector S")],
    "hermite-norm": [("--max-s", "norm_max_s", int, "largest sector S")],
    "ks-check": [("--max-s", "ks_max_s", int, "largest sector S")],
    "flow-check": [],
    "strichartz": [("--seed", "seed", int, "RNG seed for random coefficients")],
    "equivalence": [("--seed", "seed", int, "RNG seed for random coefficients")],
    "funk-hecke": [("--max-n", "fh_max_n", int, "largest harmonic degree")],
    "weighted": [],
    "report-all": [("--seed", "seed", int, "RNG seed for random coefficients")],
}


class ConfigError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpstrichartz", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="flat JSON file of RunConfig fields")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--jobs", type=int, help="worker processes")
    common.add_argument("--timing", action="store_true", default=None,
                        help="record wall time per check")
    sub = parser.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, extra in _EXTRA.items():
        p = sub.add_parser(name, parents=[common])
        for flag, key, typ, text in extra:
            p.add_argument(flag, dest=key, type=typ, help=text)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Merge config file and flags (flags win) into a validated RunConfig."""
    values: dict = {}
    if args.config is not None:
        try:
            data = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat JSON object")
        unknown = set(data) - RunConfig.keys()
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if any(isinstance(v, (dict, list)) for k, v in data.items() if k != "suites"):
            raise ConfigError("config must be flat")
        values.update(data)
    for key in RunConfig.keys():
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if "suites" in values:
        values["suites"] = tuple(values["suites"])
        bad = set(values["suites"]) - set(SUITES)
        if bad:
            raise ConfigError(f"unknown suites: {', '.join(sorted(bad))}")
    try:
        return RunConfig(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def plan(command: str, cfg: RunConfig) -> list[CheckSpec]:
    if command == "report-all":
        names = cfg.suites or tuple(SUITES)
    else:
        names = (command,)
    specs = [s for name in names for s in SUITES[name](cfg)]
    ids = [s.id for s in specs]
    if len(ids) != len(set(ids)):
        raise RuntimeError("duplicate check ids")
    return specs


def _timed(spec: CheckSpec) -> tuple[dict, float]:
    t0 = time.perf_counter()
    out = run_spec(spec)
    return out, time.perf_counter() - t0


def _record(spec: CheckSpec, result: dict, elapsed: float, timing: bool) -> CheckRecord:
    inputs = dict(spec.kwargs)
    if "detail" in result:
        inputs["detail"] = result["detail"]
    return CheckRecord(spec.id, inputs, result["expected"], result["actual"], result["tolerance"],
                       result["pass"], wall_time=elapsed if timing else None)


def execute(specs: list[CheckSpec], cfg: RunConfig) -> list[CheckRecord]:
    """Run every check; results come back in plan order regardless of --jobs."""
    if cfg.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(_timed, specs))
    else:
        outcomes = [_timed(s) for s in specs]
    return [_record(s, r, dt, cfg.timing) for s, (r, dt) in zip(specs, outcomes)]


def run(command: str, cfg: RunConfig) -> tuple[int, Report]:
    report = Report(cfg.echo())
    try:
        report.checks = execute(plan(command, cfg), cfg)
        if command in TABLES:
            report.tables[command] = TABLES[command](cfg)
    except CAP_ERRORS as exc:
        report.checks.append(CheckRecord("resource-cap", {}, None, None, None, False,
                                         error=f"{type(exc).__name__}: {exc}"))
        return EXIT_CAP, report
    return (EXIT_OK if report.ok else EXIT_FAIL), report


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code, report = run(args.command, cfg)
    text = report.dumps(cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    s = report.summary
    print(f"{args.command}: {s['passed']}/{s['total']} checks passed", file=sys.stderr)
    if code == EXIT_CAP:
        print(report.checks[-1].error, file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
