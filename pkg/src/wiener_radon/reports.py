"""Comparison records and their JSON-lines / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from .errors import WienerRadonError

CHECK_FIELDS = ("check", "closed_form", "estimate", "std_error", "z", "pass")
EXACT_DEFAULT_TOL = 1e-12


class IoError(WienerRadonError):
    """Report could not be written."""


@dataclass(frozen=True)
class Check:
    """One closed-form vs reference comparison.

    For Monte Carlo checks ``estimate`` is the sample mean and ``z`` its
    z-score; for exact checks ``std_error`` is 0 and ``z`` is 0 on success.
    """

    check: str
    closed_form: float
    estimate: float
    std_error: float
    z: float
    passed: bool

    def to_record(self) -> dict:
        return {
            "check": self.check,
            "closed_form": self.closed_form,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "z": self.z,
            "pass": self.passed,
        }


def exact_check(name: str, closed_form: float, reference: float, rtol: float = EXACT_DEFAULT_TOL,
                atol: float | None = None) -> Check:
    """Deterministic comparison: pass iff ``|a - b| <= atol + rtol * max(|a|, |b|)``.

    ``atol`` defaults to ``rtol`` (an absolute floor for values near zero).
    """
    atol = rtol if atol is None else atol
    err = abs(closed_form - reference)
    ok = err <= atol + rtol * max(abs(closed_form), abs(reference))
    return Check(name, float(closed_form), float(reference), 0.0, 0.0 if ok else math.inf, bool(ok))


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt(v) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v)
    if v is None:
        return "null"
    raise TypeError(f"unsupported report value {v!r}")


def _csv_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def render(records, fmt: str) -> str:
    """Render flat records as JSON lines or CSV (header row from the first record)."""
    records = [r.to_record() if isinstance(r, Check) else dict(r) for r in records]
    if fmt == "json":
        lines = [
            "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in r.items()) + "}"
            for r in records
        ]
        return "".join(line + "\n" for line in lines)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if records:
            header = list(records[0].keys())
            writer.writerow(header)
            for r in records:
                writer.writerow([_csv_value(r[k]) for k in header])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def emit(records, fmt: str, path=None, stream=None) -> None:
    """Write rendered records to ``path`` (or ``stream``, default stdout)."""
    text = render(records, fmt)
    if path is None or str(path) == "-":
        (stream or sys.stdout).write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def parse_json_lines(text: str) -> list:
    return [json.loads(line) for line in text.splitlines() if line.strip()]
