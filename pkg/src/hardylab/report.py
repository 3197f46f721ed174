"""Verification records emitted by checks and by the command line."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

FLOOR = 1e-300


def _finite(x):
    return float(x) if math.isfinite(x) else None


def relative_error(computed: float, reference: float) -> float:
    return abs(computed - reference) / max(abs(reference), FLOOR)


@dataclass
class VerificationReport:
    case_id: str
    params: dict
    computed: float
    reference: float
    rel_err: float
    passed: bool
    notes: str = ""
    tolerance: float = field(default=0.0, repr=False)

    @classmethod
    def compare(cls, case_id, params, computed, reference, tol, notes=""):
        """Two-sided check: pass iff |computed - reference| / |reference| <= tol."""
        err = relative_error(computed, reference)
        ok = bool(math.isfinite(err) and err <= tol)
        return cls(case_id, dict(params), float(computed), float(reference), err, ok, notes, tol)

    @classmethod
    def at_least(cls, case_id, params, lhs, rhs, tol, notes=""):
        """One-sided check lhs >= rhs (relative slack tol).

        ``computed`` is min(lhs, rhs), so a satisfied inequality reports zero
        error and a violated one reports its relative size.
        """
        params = {**params, "lhs": float(lhs), "rhs": float(rhs)}
        return cls.compare(case_id, params, min(lhs, rhs), rhs, tol, notes)

    def as_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "params": self.params,
            "computed": _finite(self.computed),
            "reference": _finite(self.reference),
            "rel_err": _finite(self.rel_err),
            "pass": self.passed,
            "notes": self.notes,
        }


CSV_FIELDS = ["case_id", "params", "computed", "reference", "rel_err", "pass", "notes"]


def to_jsonl(reports) -> str:
    return "".join(json.dumps(r.as_dict(), sort_keys=True) + "\n" for r in reports)


def to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        row = r.as_dict()
        row["params"] = json.dumps(row["params"], sort_keys=True)
        writer.writerow(row)
    return buf.getvalue()
