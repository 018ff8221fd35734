"""Check records, report assembly and JSON/CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__


def _plain(v: Any) -> Any:
    """JSON-ready value: Fractions become "num/den", complex becomes [re, im]."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, complex):
        return [_plain(v.real), _plain(v.imag)]
    if isinstance(v, float):
        return v if math.isfinite(v) else repr(v)
    if hasattr(v, "item"):  # numpy scalar
        return _plain(v.item())
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def decimal17(v: Any) -> str:
    """17-significant-digit decimal for CSV cells."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (Fraction, int, float)):
        return format(float(v), ".17g")
    if hasattr(v, "item"):
        return decimal17(v.item())
    return "" if v is None else str(v)


@dataclass
class CheckRecord:
    id: str
    inputs: dict
    expected: Any
    actual: Any
    tolerance: Any
    passed: bool
    wall_time: float | None = None
    error: str | None = None

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "inputs": _plain(self.inputs),
            "expected": _plain(self.expected),
            "actual": _plain(self.actual),
            "tolerance": _plain(self.tolerance),
            "pass": bool(self.passed),
            "wall_time": self.wall_time,
        }
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class Report:
    config_echo: dict
    checks: list[CheckRecord] = field(default_factory=list)
    tables: dict[str, list[dict]] = field(default_factory=dict)

    @property
    def summary(self) -> dict:
        n_pass = sum(c.passed for c in self.checks)
        return {"total": len(self.checks), "passed": n_pass, "failed": len(self.checks) - n_pass}

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        out = {
            "version": __version__,
            "config_echo": _plain(self.config_echo),
            "checks": [c.to_json() for c in self.checks],
            "summary": self.summary,
        }
        if self.tables:
            out["tables"] = {k: [_plain(r) for r in rows] for k, rows in self.tables.items()}
        return out

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2) + "\n"
        if fmt == "csv":
            return self._csv()
        raise ValueError(f"unknown format {fmt!r}")

    def _csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.tables:
            # a subcommand with a table emits the table itself
            for name, rows in self.tables.items():
                if not rows:
                    continue
                cols = list(rows[0])
                w.writerow(["table"] + cols)
                for r in rows:
                    w.writerow([name] + [_csv_cell(r[c]) for c in cols])
            return buf.getvalue()
        w.writerow(["id", "inputs", "expected", "actual", "tolerance", "pass", "wall_time"])
        for c in self.checks:
            w.writerow([
                c.id,
                json.dumps(_plain(c.inputs), sort_keys=True),
                _csv_cell(c.expected),
                _csv_cell(c.actual),
                _csv_cell(c.tolerance),
                str(bool(c.passed)).lower(),
                "" if c.wall_time is None else decimal17(c.wall_time),
            ])
        return buf.getvalue()


def _csv_cell(v: Any) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, complex):
        return f"{decimal17(v.real)}{'+' if v.imag >= 0 else '-'}{decimal17(abs(v.imag))}j"
    return decimal17(v)
