from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    seed: int | None = Field(default=None, alias="GCPLAB_SEED", ge=0, lt=2**64)
    workers: int = Field(default=1, alias="GCPLAB_WORKERS", ge=1)
    block_size: int = Field(default=8192, alias="GCPLAB_BLOCK_SIZE", ge=1)

    omega_cap: int = Field(default=10_000_000, alias="GCPLAB_OMEGA_CAP", ge=1)
    jet_max_order: int = Field(default=64, alias="GCPLAB_JET_MAX_ORDER", ge=0)
    ml_x_max: float = Field(default=30.0, alias="GCPLAB_ML_X_MAX", gt=0)
    pmf_tail_tol: float = Field(default=1e-8, alias="GCPLAB_PMF_TAIL_TOL", gt=0)
    quad_tol: float = Field(default=1e-6, alias="GCPLAB_QUAD_TOL", gt=0)

    grid_step: float = Field(default=0.01, alias="GCPLAB_GRID_STEP", gt=0)
    hitting_max_steps: int = Field(default=200_000, alias="GCPLAB_HITTING_MAX_STEPS", ge=1)
    rejection_cap: int = Field(default=1_000_000, alias="GCPLAB_REJECTION_CAP", ge=1)
    min_tail_exceedances: int = Field(default=100, alias="GCPLAB_MIN_TAIL_EXCEEDANCES", ge=1)

    log_level: str = Field(default="INFO", alias="GCPLAB_LOG_LEVEL")
    log_dir: str | None = Field(default=None, alias="GCPLAB_LOG_DIR")
    runtime_budget_seconds: float = Field(default=300.0, alias="GCPLAB_RUNTIME_BUDGET_SECONDS", gt=0)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
