"""Inequality reports shared by the checking modules."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["InequalityReport", "HOLDS", "EQUALITY", "VIOLATED", "skipped", "classify"]

HOLDS = "HOLDS"
EQUALITY = "EQUALITY"
VIOLATED = "VIOLATED"


def skipped(reason: str) -> str:
    return f"SKIPPED({reason})"


def _clean(x):
    if x is None:
        return None
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (bool, str)):
        return x
    try:
        v = float(x)
    except (TypeError, ValueError):
        return str(x)
    if isinstance(x, int) and not isinstance(x, bool):
        return int(x)
    return v if math.isfinite(v) else None


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one named check.

    Margins are oriented so that a positive margin means the asserted
    inequality holds; ``None`` marks an unused slot.
    """

    check: str
    params: dict
    left: float | None
    middle: float | None
    right: float | None
    margins: tuple
    tol: float
    status: str
    notes: tuple = ()
    data: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def passed(self) -> bool:
        return self.status in (HOLDS, EQUALITY)

    @property
    def skipped(self) -> bool:
        return self.status.startswith("SKIPPED")

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "params": _clean(self.params),
            "left": _clean(self.left),
            "middle": _clean(self.middle),
            "right": _clean(self.right),
            "margins": _clean(list(self.margins)),
            "tol": _clean(self.tol),
            "status": self.status,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)


def classify(margins, tol: float, equality: tuple[bool, ...] = ()) -> str:
    """Status from oriented margins.

    ``equality[i]`` says slot i is an expected equality case; such a slot
    reports EQUALITY when |margin| <= tol.  Any margin below -tol is a
    violation.
    """
    eq_hit = False
    for i, m in enumerate(margins):
        if m is None:
            continue
        if not math.isfinite(m):
            return VIOLATED
        if m < -tol:
            return VIOLATED
        if i < len(equality) and equality[i] and abs(m) <= tol:
            eq_hit = True
    return EQUALITY if eq_hit else HOLDS
