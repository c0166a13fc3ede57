"""Identity reports and their newline-delimited JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass


@dataclass
class IdentityReport:
    identity_id: str
    curve_id: str
    trials: int
    completed: int
    max_abs_residual: float
    max_rel_residual: float
    seed: int
    tol: float
    passed: bool
    elapsed_ms: int

    @property
    def ok(self):
        return self.passed


_FIELDS = ("identity", "curve", "trials", "completed", "max_abs_residual",
           "max_rel_residual", "seed", "tol", "pass", "elapsed_ms")


def report_record(r: IdentityReport) -> dict:
    return {
        "identity": r.identity_id,
        "curve": r.curve_id,
        "trials": r.trials,
        "completed": r.completed,
        "max_abs_residual": float(r.max_abs_residual),
        "max_rel_residual": float(r.max_rel_residual),
        "seed": r.seed,
        "tol": float(r.tol),
        "pass": bool(r.passed),
        "elapsed_ms": r.elapsed_ms,
    }


def format_report_line(r: IdentityReport) -> str:
    rec = report_record(r)
    # fixed field order, shortest round-trip floats (json uses repr)
    return json.dumps({k: rec[k] for k in _FIELDS})


def write_report(reports, path):
    """Write one JSON record per line; empty list gives an empty file."""
    with open(path, "w") as fh:
        for r in reports:
            fh.write(format_report_line(r) + "\n")
