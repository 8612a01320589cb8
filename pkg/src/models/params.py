from __future__ import annotations

import math
from enum import Enum
from typing import NamedTuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class GcpParams(BaseModel):
    """Jump rates λ_1..λ_k of a generalized counting process.

    Rate j belongs to jumps of size j. Zero rates are allowed and mean
    the jump size never occurs; only the total rate must be positive.
    """

    model_config = ConfigDict(frozen=True)

    rates: tuple[float, ...] = Field(min_length=1)

    @field_validator("rates")
    @classmethod
    def _check_rates(cls, rates: tuple[float, ...]) -> tuple[float, ...]:
        for rate in rates:
            if not math.isfinite(rate) or rate < 0:
                raise ValueError(f"rates must be finite and non-negative, got {rates}")
        if sum(rates) <= 0:
            raise ValueError("total rate must be positive")
        return tuple(float(rate) for rate in rates)

    @classmethod
    def of(cls, *rates: float) -> GcpParams:
        return cls(rates=tuple(rates))

    @property
    def k(self) -> int:
        return len(self.rates)

    @property
    def total_rate(self) -> float:
        return math.fsum(self.rates)

    @property
    def c1(self) -> float:
        return math.fsum(j * rate for j, rate in enumerate(self.rates, start=1))

    @property
    def c2(self) -> float:
        return math.fsum(j * j * rate for j, rate in enumerate(self.rates, start=1))

    def jump_law(self) -> tuple[float, ...]:
        total = self.total_rate
        return tuple(rate / total for rate in self.rates)


class Composition(NamedTuple):
    """One solution x of x_1 + 2x_2 + ... + kx_k = n."""

    x: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(self.x)

    def target(self) -> int:
        return sum(j * xj for j, xj in enumerate(self.x, start=1))


class ClockKind(str, Enum):
    STABLE = "stable"
    INVERSE_STABLE = "inverse_stable"
    FIRST_PASSAGE = "first_passage"
    FIRST_PASSAGE_DRIFT = "first_passage_drift"
    SQUARED_BESSEL = "squared_bessel"
    ARCSINE_SOJOURN = "arcsine_sojourn"
    ELASTIC = "elastic"
    INC_GAMMA = "inc_gamma"
    TEMPERED_INC_GAMMA = "tempered_inc_gamma"


class ClockSpec(BaseModel):
    """A random clock and its index parameters."""

    model_config = ConfigDict(frozen=True)

    kind: ClockKind
    alpha: float | None = None
    beta: float | None = None
    mu: float | None = None
    gamma_dim: float | None = None
    gamma_el: float | None = None
    epsilon: float = 1.0
    theta: float | None = None

    @model_validator(mode="after")
    def _check_indices(self) -> ClockSpec:
        kind = self.kind
        if kind in {ClockKind.STABLE, ClockKind.INC_GAMMA, ClockKind.TEMPERED_INC_GAMMA}:
            _require_unit(self.alpha, "alpha")
        if kind == ClockKind.INVERSE_STABLE:
            _require_unit(self.beta, "beta")
        if kind == ClockKind.FIRST_PASSAGE_DRIFT and self.mu is None:
            raise ValueError("first_passage_drift needs mu")
        if kind == ClockKind.SQUARED_BESSEL and not (self.gamma_dim and self.gamma_dim > 0):
            raise ValueError("squared_bessel needs gamma_dim > 0")
        if kind == ClockKind.ELASTIC and not (self.gamma_el and self.gamma_el > 0):
            raise ValueError("elastic needs gamma_el > 0")
        if kind == ClockKind.INC_GAMMA and not self.epsilon > 0:
            raise ValueError("inc_gamma needs epsilon > 0")
        if kind == ClockKind.TEMPERED_INC_GAMMA and not (self.theta and self.theta > 0):
            raise ValueError("tempered_inc_gamma needs theta > 0")
        return self


def _require_unit(value: float | None, name: str) -> None:
    if value is None or not 0 < value <= 1:
        raise ValueError(f"{name} must lie in (0, 1], got {value}")
