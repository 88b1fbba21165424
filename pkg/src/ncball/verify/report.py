"""Verification reports: per-trial records, summaries and JSON output."""
import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


def digest(*arrays):
    """Short sha256 of the instance data."""
    h = hashlib.sha256()
    for a in arrays:
        a = np.ascontiguousarray(np.asarray(a, dtype=np.complex128))
        h.update(str(a.shape).encode())
        h.update(a.tobytes())
    return h.hexdigest()[:16]


def _clean(x):
    """JSON-safe floats (non-finite values become strings)."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    return x


@dataclass
class TrialRecord:
    trial: int
    digest: str
    residuals: dict
    margin: float
    status: str
    note: str | None = None
    instance: dict | None = None

    def to_json(self):
        out = {"trial": self.trial, "digest": self.digest, "residuals": _clean(self.residuals),
               "margin": _clean(self.margin), "pass": self.status == PASS, "status": self.status}
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    check: str
    kind: str
    tolerance: float
    config: dict
    records: list
    metadata: dict = field(default_factory=dict)

    @property
    def failures(self):
        return [r for r in self.records if r.status == FAIL]

    @property
    def inconclusive(self):
        return [r for r in self.records if r.status == INCONCLUSIVE]

    @property
    def passed(self):
        return not self.failures and not self.inconclusive and bool(self.records)

    @property
    def status(self):
        if self.failures:
            return FAIL
        if self.inconclusive or not self.records:
            return INCONCLUSIVE
        return PASS

    @property
    def worst_margin(self):
        vals = [r.margin for r in self.records if r.status != INCONCLUSIVE]
        return min(vals) if vals else None

    def worst_residual(self, name=None):
        vals = []
        for r in self.records:
            for k, v in r.residuals.items():
                if (name is None or k == name) and isinstance(v, (int, float)) \
                        and not isinstance(v, bool):
                    vals.append(abs(float(v)))
        return max(vals) if vals else None

    def summary(self):
        return {"trials": len(self.records), "failures": len(self.failures),
                "inconclusive": len(self.inconclusive), "worst_margin": self.worst_margin,
                "status": self.status}

    def to_json(self):
        return {"check": self.check, "kind": self.kind, "tolerance": self.tolerance,
                "config": _clean(self.config), "metadata": _clean(self.metadata),
                "summary": _clean(self.summary()),
                "trials": [r.to_json() for r in self.records]}

    def dumps(self):
        return dumps(self.to_json())

    def line(self):
        s = self.summary()
        wm = "n/a" if s["worst_margin"] is None else f"{s['worst_margin']:.3e}"
        return (f"{self.check:22s} {s['status']:12s} trials={s['trials']:<5d} "
                f"failures={s['failures']:<4d} inconclusive={s['inconclusive']:<4d} "
                f"worst_margin={wm}")


def dumps(obj):
    """Canonical JSON text; identical input gives identical bytes."""
    return json.dumps(_clean(obj), sort_keys=True, indent=1) + "\n"
