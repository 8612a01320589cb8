import math

import numpy as np
import pytest

from src.errors import DomainError, InfiniteMomentError
from src.models.experiment import ExperimentConfig, Family
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.estimators import empirical_pmf, mean_estimate, total_variation
from src.workflow.families import FAMILY_BUILDERS, build_family, normalization_report

RATES = [0.7, 0.3]


def _config(family: Family, **values) -> ExperimentConfig:
    return ExperimentConfig(family=family, rates=RATES, **values)


def test_every_family_has_a_builder():
    assert set(FAMILY_BUILDERS) == set(Family)


@pytest.mark.parametrize(
    "config",
    [
        _config(Family.GCP),
        _config(Family.GSFCP, beta=0.7),
        _config(Family.FP),
        _config(Family.FPD, mu=0.5),
        _config(Family.FPD, mu=0.0),
        _config(Family.BESSEL, gamma_dim=2.0),
        _config(Family.ELASTIC, gamma_el=1.5),
        _config(Family.SOJOURN),
        _config(Family.INCGAMMA, alpha=0.6),
        _config(Family.TEMPERED, alpha=0.6, theta=1.0),
    ],
    ids=lambda config: config.family.value,
)
@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_pmfs_are_normalized(config, t):
    report = normalization_report(build_family(config), t)
    assert report.error < 1e-6


def test_defective_passage_carries_its_mass():
    model = build_family(_config(Family.FPD, mu=-0.5))
    report = normalization_report(model, 1.0)
    assert report.expected_mass == pytest.approx(math.exp(-1.0))
    assert report.error < 1e-6


def test_heavy_families_report_their_tail():
    report = normalization_report(build_family(_config(Family.FP)), 1.0)
    assert report.truncation == 200
    assert report.tail_mass > 0


def test_gcp_histogram_matches_pmf():
    model = build_family(_config(Family.GCP))
    engine = MonteCarloEngine(seed=10, workers=2)
    counts = engine.run_sync(model.sample_counts(1.0), 200_000, "families/gcp")
    analytic = np.array([model.pmf(n, 1.0) for n in range(31)])
    assert total_variation(empirical_pmf(counts, 30), analytic) < 0.01


def test_drifted_counts_remove_the_drift():
    model = build_family(_config(Family.DRIFTED, drift=0.5))
    engine = MonteCarloEngine(seed=3)
    values = engine.run_sync(model.sample_values(2.0), 1000, "families/drifted")
    counts = engine.run_sync(model.sample_counts(2.0), 1000, "families/drifted")
    assert np.allclose(values - counts, 1.0)
    assert model.moments_at(2.0).mean == pytest.approx(1.3 * 2.0 + 1.0)


def test_bessel_sampler_matches_mean():
    model = build_family(_config(Family.BESSEL, gamma_dim=2.0))
    counts = MonteCarloEngine(seed=21).run_sync(model.sample_counts(1.0), 200_000, "families/bessel")
    assert mean_estimate(counts).within(model.moments_at(1.0).mean)


def test_moments_and_transforms_guard_their_domains():
    with pytest.raises(InfiniteMomentError):
        build_family(_config(Family.FP)).moments_at(1.0)
    with pytest.raises(DomainError):
        build_family(_config(Family.ELASTIC, gamma_el=1.5)).moments_at(1.0)
    drifted = build_family(_config(Family.GSTFCP_DRIFT, alpha=0.6, gamma=0.7, beta=0.8, drift=0.5))
    with pytest.raises(DomainError):
        drifted.sample_counts(1.0)
    with pytest.raises(DomainError):
        drifted.pmf(0, 1.0)
    with pytest.raises(DomainError):
        build_family(_config(Family.DRIFTED, drift=0.5)).pgf_at(0.5, 1.0)


def test_transforms_are_consistent():
    model = build_family(_config(Family.TEMPERED, alpha=0.6, theta=1.0))
    assert model.laplace(1.0, 1.0) == pytest.approx(model.pgf_at(math.exp(-1.0), 1.0))
    assert model.pgf_at(1.0, 1.0) == pytest.approx(1.0)
    stable_drift = build_family(_config(Family.GSTFCP_DRIFT, alpha=0.6, gamma=0.7, beta=0.8))
    assert stable_drift.laplace(1.0, 1.0) == pytest.approx(stable_drift.pgf_at(math.exp(-1.0), 1.0), rel=1e-10)
