from src.montecarlo.engine import BlockSampler, MonteCarloEngine
from src.montecarlo.estimators import (
    covariance_estimate,
    empirical_pmf,
    laplace_estimate,
    mean_estimate,
    pgf_estimate,
    survival_counts,
    survival_slope,
    total_variation,
    two_sample_pvalue,
    variance_estimate,
)
from src.montecarlo.rng import resolve_seed, stream_id, substream

__all__ = [
    "BlockSampler",
    "MonteCarloEngine",
    "covariance_estimate",
    "empirical_pmf",
    "laplace_estimate",
    "mean_estimate",
    "pgf_estimate",
    "resolve_seed",
    "stream_id",
    "substream",
    "survival_counts",
    "survival_slope",
    "total_variation",
    "two_sample_pvalue",
    "variance_estimate",
]
