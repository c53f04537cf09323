"""Report assembly and canonical serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

SIG_DIGITS = 12


@dataclass
class Report:
    sections: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def add(self, section: str, record: dict) -> None:
        if "check" not in record or "passed" not in record:
            raise ValueError("check records need 'check' and 'passed' fields")
        records = self.sections.setdefault(section, [])
        if any(r["check"] == record["check"] for r in records):
            raise ValueError(f"duplicate check {section}/{record['check']}")
        records.append(record)

    def extend(self, section: str, records) -> None:
        self.sections.setdefault(section, [])
        for r in records:
            self.add(section, r)

    def records(self):
        for name in sorted(self.sections):
            for rec in self.sections[name]:
                yield name, rec

    @property
    def summary(self) -> dict:
        recs = [r for _, r in self.records()]
        claims = sorted({r["claim"] for r in recs if r.get("claim") and r["passed"]})
        return {
            "checks_run": len(recs),
            "checks_passed": sum(bool(r["passed"]) for r in recs),
            "paper_claims_reproduced": claims,
        }

    @property
    def passed(self) -> bool:
        s = self.summary
        return s["checks_run"] == s["checks_passed"]

    def to_dict(self) -> dict:
        return {"sections": self.sections, "summary": self.summary, "metadata": self.metadata}


def _round(x: float) -> float:
    if not np.isfinite(x):
        raise ValueError(f"non-finite value {x!r} in report")
    r = float(f"{x:.{SIG_DIGITS}g}")
    return 0.0 if r == 0 else r


def canonical(obj):
    """Convert to JSON-ready values with floats rounded to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_round(obj.real), _round(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


CSV_VALUE_KEYS = ("distance", "joint_distance", "witness_gap", "min_product_value", "disagreements", "value")


def emit(report: Report, fmt: str = "json") -> bytes:
    data = canonical(report.to_dict())
    if fmt == "json":
        return (json.dumps(data, sort_keys=True, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["section", "check", "passed", "value", "detail"])
        for section in sorted(data["sections"]):
            for rec in data["sections"][section]:
                value = next((rec[k] for k in CSV_VALUE_KEYS if k in rec), "")
                rest = {k: v for k, v in rec.items() if k not in ("check", "passed")}
                writer.writerow([section, rec["check"], rec["passed"], value, json.dumps(rest, sort_keys=True)])
        return buf.getvalue().encode()
    raise ValueError(f"unknown format {fmt!r}")
