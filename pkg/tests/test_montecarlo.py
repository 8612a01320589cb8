import asyncio

import numpy as np
import pytest

from src.errors import ConfigError, DomainError, InsufficientSamplesError
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.estimators import (
    covariance_estimate,
    empirical_pmf,
    laplace_estimate,
    mean_estimate,
    pgf_estimate,
    survival_slope,
    total_variation,
    variance_estimate,
)
from src.montecarlo.rng import resolve_seed, stream_id, substream


def _normal_block(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.standard_normal(size)


def test_substreams_are_keyed_by_seed_stream_and_block():
    first = substream(7, "pmf/gcp", 0).random(4)
    assert np.array_equal(first, substream(7, "pmf/gcp", 0).random(4))
    assert not np.array_equal(first, substream(7, "pmf/gcp", 1).random(4))
    assert not np.array_equal(first, substream(8, "pmf/gcp", 0).random(4))
    assert stream_id("pmf/gcp") == stream_id("pmf/gcp")
    assert stream_id(5) == 5


def test_engine_output_does_not_depend_on_worker_count():
    results = [
        MonteCarloEngine(seed=123, workers=workers, block_size=1000).run_sync(_normal_block, 4500, "test")
        for workers in (1, 2, 8)
    ]
    assert results[0].shape == (4500,)
    assert all(np.array_equal(results[0], other) for other in results[1:])


def test_engine_runs_inside_an_event_loop():
    engine = MonteCarloEngine(seed=5, workers=2, block_size=100)
    values = asyncio.run(engine.run(_normal_block, 250, "loop"))
    assert values.shape == (250,)
    assert engine.plan(250) == [100, 100, 50]
    with pytest.raises(DomainError):
        engine.plan(0)


def test_resolve_seed_prefers_explicit_value(monkeypatch):
    assert resolve_seed(11) == 11
    monkeypatch.delenv("GCPLAB_SEED", raising=False)
    from src.config import settings as settings_module

    settings_module.get_settings.cache_clear()
    try:
        with pytest.raises(ConfigError):
            resolve_seed(None)
    finally:
        settings_module.get_settings.cache_clear()


def test_estimators():
    values = np.array([1.0, 2.0, 3.0, 4.0])
    estimate = mean_estimate(values)
    assert estimate.value == pytest.approx(2.5)
    assert estimate.stderr == pytest.approx(np.std(values, ddof=1) / 2.0)
    assert variance_estimate(values).value == pytest.approx(np.var(values, ddof=1))
    assert covariance_estimate(values, 2.0 * values).value == pytest.approx(2.0 * np.var(values, ddof=1))
    assert laplace_estimate(values, 0.0).value == 1.0
    assert pgf_estimate(np.array([0, 1, 1, 2]), 0.0).value == pytest.approx(0.25)
    with pytest.raises(DomainError):
        mean_estimate(np.array([1.0]))


def test_estimate_within_uses_standard_errors():
    estimate = mean_estimate(np.array([0.0, 2.0, 0.0, 2.0]))
    assert estimate.within(1.0)
    assert not estimate.within(10.0)


def test_empirical_pmf_and_total_variation():
    counts = np.array([0, 1, 1, 2, 40])
    pmf = empirical_pmf(counts, 3)
    assert np.allclose(pmf, [0.2, 0.4, 0.2, 0.0])
    assert total_variation(pmf, np.array([0.2, 0.4, 0.2, 0.2])) == pytest.approx(0.1)


def test_survival_slope_of_pareto_sample():
    rng = np.random.default_rng(3)
    samples = rng.pareto(0.5, 1_000_000) + 1.0
    slope, log_survival = survival_slope(samples, (10.0, 100.0, 1000.0))
    assert slope == pytest.approx(-0.5, abs=0.05)
    assert log_survival.shape == (3,)
    with pytest.raises(InsufficientSamplesError):
        survival_slope(samples[:100], (10.0, 1e6))
