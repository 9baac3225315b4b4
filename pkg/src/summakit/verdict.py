from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Status(str, Enum):
    CONVERGES = "Converges"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"
    WITNESS_REJECTED = "WitnessRejected"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of a finite-data convergence test.

    ``diagnostics`` is a plain JSON-ready dict; its keys depend on the test.
    """

    status: Status
    limit: float | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def converges(self) -> bool:
        return self.status is Status.CONVERGES

    @property
    def refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def definite(self) -> bool:
        return self.status in (Status.CONVERGES, Status.REFUTED)

    def summary(self) -> dict:
        return {"status": self.status.value, "limit": self.limit}

    def __str__(self):
        if self.converges:
            return "Converges(%g)" % self.limit
        return self.status.value


def converges(limit: float, **diagnostics) -> ConvergenceVerdict:
    return ConvergenceVerdict(Status.CONVERGES, float(limit), diagnostics)


def refuted(**diagnostics) -> ConvergenceVerdict:
    return ConvergenceVerdict(Status.REFUTED, None, diagnostics)


def inconclusive(**diagnostics) -> ConvergenceVerdict:
    return ConvergenceVerdict(Status.INCONCLUSIVE, None, diagnostics)
