"""Verdicts and per-property reports."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    BUDGET = "budget"

    @property
    def exit_code(self) -> int:
        return {"holds": 0, "fails": 1, "budget": 2}[self.value]


@dataclass(frozen=True)
class ClassReport:
    """Outcome of one property check.  A ``FAILS`` verdict always carries a
    replayable witness."""

    name: str
    verdict: Verdict
    witness: object = None
    detail: str = ""

    def __post_init__(self):
        if self.verdict is Verdict.FAILS and self.witness is None:
            raise ValueError(f"{self.name}: failing report without witness")

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def __bool__(self):
        return self.holds
