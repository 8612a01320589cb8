from __future__ import annotations

from enum import Enum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Family(str, Enum):
    GCP = "gcp"
    GFCP = "gfcp"
    GSFCP = "gsfcp"
    GSTFCP_DRIFT = "gstfcp_drift"
    DRIFTED = "drifted"
    FP = "fp"
    FPD = "fpd"
    BESSEL = "bessel"
    ELASTIC = "elastic"
    SOJOURN = "sojourn"
    INCGAMMA = "incgamma"
    TEMPERED = "tempered"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class TransformKind(str, Enum):
    PGF = "pgf"
    LAPLACE = "laplace"


class Suite(str, Enum):
    SPECFUN = "specfun"
    GCP = "gcp"
    CLOCKS = "clocks"
    BROWNIAN = "brownian"
    SUBORDINATED = "subordinated"
    DRIFT = "drift"
    FRACINT = "fracint"
    ALL = "all"


class ElasticMethod(str, Enum):
    SERIES = "series"
    EQUAL_RATE = "equal-rate"
    QUADRATURE = "quadrature"
    DERIVATIVE = "derivative"


class ExperimentConfig(BaseModel):
    """One experiment: a process family, its parameters and the MC budget."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = 1
    family: Family = Family.GCP
    rates: list[float] = Field(default_factory=lambda: [1.0])

    alpha: float | None = None
    beta: float | None = None
    gamma: float | None = None
    gamma_dim: float | None = None
    gamma_el: float | None = None
    mu: float | None = None
    epsilon: float = 1.0
    theta: float | None = None
    drift: float = 0.0
    elastic_method: ElasticMethod = ElasticMethod.SERIES

    t_grid: list[float] = Field(default_factory=lambda: [1.0])
    s: float | None = None
    n_max: int = Field(default=30, ge=0)
    transform: TransformKind = TransformKind.PGF
    args: list[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0])
    a_grid: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    y_grid: list[float] = Field(default_factory=lambda: [1e2, 3e2, 1e3, 3e3, 1e4])

    reps: int = Field(default=0, ge=0)
    seed: int | None = Field(default=None, ge=0, lt=2**64)
    format: OutputFormat = OutputFormat.CSV
    workers: int | None = Field(default=None, ge=1)
    grid_step: float | None = Field(default=None, gt=0)
    suite: Suite = Suite.ALL
    tolerances: dict[str, float] = Field(default_factory=dict)

    @field_validator("t_grid")
    @classmethod
    def _check_times(cls, grid: list[float]) -> list[float]:
        if not grid or any(t <= 0 for t in grid):
            raise ValueError("t_grid must be a non-empty list of positive times")
        return grid

    @model_validator(mode="after")
    def _check_family_parameters(self) -> ExperimentConfig:
        required = {
            Family.GFCP: ("beta",),
            Family.GSFCP: ("beta",),
            Family.GSTFCP_DRIFT: ("alpha", "gamma", "beta"),
            Family.FPD: ("mu",),
            Family.BESSEL: ("gamma_dim",),
            Family.ELASTIC: ("gamma_el",),
            Family.INCGAMMA: ("alpha",),
            Family.TEMPERED: ("alpha", "theta"),
        }
        missing = [name for name in required.get(self.family, ()) if getattr(self, name) is None]
        if missing:
            raise ValueError(f"family {self.family.value} needs {', '.join(missing)}")
        return self

    def tolerance(self, name: str, default: float) -> float:
        return self.tolerances.get(name, default)
