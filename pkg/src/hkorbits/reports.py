"""Structured verification results and their JSON form."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import math

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


def _num(x):
    """Plain Python value for JSON; reals keep 17 significant digits."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    try:
        f = float(x)
    except (TypeError, ValueError):
        return str(x)
    if math.isnan(f) or math.isinf(f):
        return repr(f)
    return f


@dataclass
class CheckReport:
    check_name: str
    inputs: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    tolerance: float = 0.0
    status: str = ""
    paper_anchor: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = self.evaluate()

    def evaluate(self):
        if not self.residuals:
            return SKIPPED
        vals = [float(v) for v in self.residuals.values()]
        ok = all(math.isfinite(v) and v <= self.tolerance for v in vals)
        return PASS if ok else FAIL

    @property
    def passed(self):
        return self.status == PASS

    def max_residual(self):
        return max((float(v) for v in self.residuals.values()), default=0.0)

    def to_dict(self):
        return {
            "check_name": self.check_name,
            "inputs": {k: _jsonable(v) for k, v in self.inputs.items()},
            "residuals": {k: _num(v) for k, v in self.residuals.items()},
            "tolerance": _num(self.tolerance),
            "status": self.status,
            "paper_anchor": self.paper_anchor,
        }

    def to_json(self):
        # repr of a float round-trips exactly (>= 12 significant digits)
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        d = json.loads(text)
        return cls(d["check_name"], d["inputs"], d["residuals"], d["tolerance"], d["status"], d["paper_anchor"])

    def to_text(self):
        worst = self.max_residual()
        inp = ", ".join(f"{k}={_fmt(v)}" for k, v in self.inputs.items())
        if not self.residuals:
            return f"[{self.status}] {self.check_name} ({inp}) nothing to compare"
        rel = "<=" if self.passed else ">"
        return f"[{self.status}] {self.check_name} ({inp}) max residual {worst:.3e} {rel} tol {self.tolerance:.1e}"


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return _num(v)


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return "(" + ",".join(_fmt(x) for x in v) + ")"
    return str(v)
