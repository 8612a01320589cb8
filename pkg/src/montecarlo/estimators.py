from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import stats

from src.config.settings import get_settings
from src.errors import DomainError, InsufficientSamplesError
from src.models.outputs import McEstimate


def _samples(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise DomainError("estimators need a 1-d sample of at least two values")
    return values


def mean_estimate(values: np.ndarray) -> McEstimate:
    values = _samples(values)
    return McEstimate(
        value=float(values.mean()),
        stderr=float(values.std(ddof=1) / math.sqrt(values.size)),
        reps=values.size,
    )


def variance_estimate(values: np.ndarray) -> McEstimate:
    """Sample variance with its delta-method standard error sqrt((m4 - s^4) / n)."""
    values = _samples(values)
    centered = values - values.mean()
    var = float(centered.var(ddof=1))
    m4 = float(np.mean(centered**4))
    return McEstimate(value=var, stderr=math.sqrt(max(m4 - var * var, 0.0) / values.size), reps=values.size)


def covariance_estimate(x: np.ndarray, y: np.ndarray) -> McEstimate:
    x, y = _samples(x), _samples(y)
    if x.size != y.size:
        raise DomainError("covariance needs paired samples")
    products = (x - x.mean()) * (y - y.mean())
    return McEstimate(
        value=float(products.sum() / (x.size - 1)),
        stderr=float(products.std(ddof=1) / math.sqrt(x.size)),
        reps=x.size,
    )


def laplace_estimate(values: np.ndarray, s: float) -> McEstimate:
    """E exp(-s X); infinite samples contribute 0 for s > 0."""
    values = _samples(values)
    if s < 0:
        raise DomainError("Laplace argument must be non-negative")
    if s == 0:
        return McEstimate(value=1.0, stderr=0.0, reps=values.size)
    return mean_estimate(np.exp(-s * values))


def pgf_estimate(counts: np.ndarray, u: float) -> McEstimate:
    counts = _samples(counts)
    if abs(u) > 1:
        raise DomainError("pgf argument must satisfy |u| <= 1")
    if u == 0:
        return mean_estimate((counts == 0).astype(float))
    return mean_estimate(np.power(u, counts))


def empirical_pmf(counts: np.ndarray, n_max: int) -> np.ndarray:
    """Frequencies of 0..n_max over all samples, so the tail mass is what is missing."""
    counts = np.asarray(counts, dtype=np.int64)
    inside = counts[(counts >= 0) & (counts <= n_max)]
    return np.bincount(inside, minlength=n_max + 1)[: n_max + 1] / counts.size


def total_variation(empirical: np.ndarray, analytic: np.ndarray) -> float:
    """Half the l1 distance over the common support n <= n_max."""
    empirical, analytic = np.asarray(empirical, dtype=float), np.asarray(analytic, dtype=float)
    if empirical.shape != analytic.shape:
        raise DomainError("pmf vectors differ in length")
    return 0.5 * float(np.abs(empirical - analytic).sum())


def survival_counts(values: np.ndarray, y_grid: Sequence[float]) -> np.ndarray:
    values = np.sort(np.asarray(values, dtype=float))
    return values.size - np.searchsorted(values, np.asarray(y_grid, dtype=float), side="right")


def survival_slope(
    values: np.ndarray,
    y_grid: Sequence[float],
    min_exceedances: int | None = None,
) -> tuple[float, np.ndarray]:
    """Least-squares slope of log P{X > y} against log y, with the log survival column.

    Every grid point must carry at least min_exceedances samples above it.
    """
    y_grid = np.asarray(y_grid, dtype=float)
    if y_grid.size < 2 or np.any(y_grid <= 0):
        raise DomainError("tail grid needs at least two positive points")
    needed = min_exceedances if min_exceedances is not None else get_settings().min_tail_exceedances
    counts = survival_counts(values, y_grid)
    if np.any(counts < needed):
        raise InsufficientSamplesError(
            f"tail counts {counts.tolist()} fall below {needed} exceedances",
            counts=counts.tolist(),
        )
    log_survival = np.log(counts / np.asarray(values).size)
    slope = float(np.polyfit(np.log(y_grid), log_survival, 1)[0])
    return slope, log_survival


def two_sample_pvalue(first: np.ndarray, second: np.ndarray) -> float:
    return float(stats.ks_2samp(first, second).pvalue)
