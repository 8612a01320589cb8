from __future__ import annotations

from datetime import datetime, timezone
from enum import Enum
from typing import Any

from pydantic import BaseModel, Field


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class McEstimate(BaseModel):
    value: float
    stderr: float
    reps: int

    def z_score(self, target: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.value == target else float("inf")
        return abs(self.value - target) / self.stderr

    def within(self, target: float, n_se: float = 4.0) -> bool:
        return self.z_score(target) <= n_se


class MomentRecord(BaseModel):
    mean: float
    var: float
    cov: float | None = None
    factorial_moment2: float | None = None


class DriftedLaw(BaseModel):
    """Atomic law of M(t) + bt: masses gcp_pmf(n, t) at locations n + bt."""

    drift: float = Field(ge=0)
    t: float = Field(gt=0)
    atoms: list[tuple[float, float]] = Field(default_factory=list)

    def total_mass(self) -> float:
        return sum(mass for _, mass in self.atoms)


class CheckResult(BaseModel):
    suite: str
    name: str
    passed: bool
    measured: float | None = None
    expected: float | None = None
    tolerance: float | None = None
    seed: int | None = None
    message: str = ""


class VerificationReport(BaseModel):
    status: CheckStatus
    suites: list[str] = Field(default_factory=list)
    checks: list[CheckResult] = Field(default_factory=list)
    failed_checks: list[str] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)
    suite_timings: dict[str, float] = Field(default_factory=dict)
    events: list[dict[str, Any]] = Field(default_factory=list)
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))


class CommandTable(BaseModel):
    command: str
    columns: list[str]
    rows: list[dict[str, Any]] = Field(default_factory=list)
    seed: int | None = None
    reps: int = 0
    # set by verify only; never serialized with the table
    report: VerificationReport | None = Field(default=None, exclude=True)


class NormalizationReport(BaseModel):
    """Sum of a pmf up to its truncation point, plus the tail it accounts for."""

    family: str
    t: float
    truncation: int
    partial_sum: float
    tail_mass: float = 0.0
    expected_mass: float = 1.0

    @property
    def total(self) -> float:
        return self.partial_sum + self.tail_mass

    @property
    def error(self) -> float:
        return abs(self.total - self.expected_mass)
