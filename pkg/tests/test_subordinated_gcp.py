import math

import numpy as np
import pytest

from src.errors import DomainError, OrderError
from src.models.params import ClockKind, ClockSpec, GcpParams
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.estimators import mean_estimate, variance_estimate
from src.processes.gcp_core import gcp_pmf
from src.processes.subordinated_gcp import (
    gfcp_cov,
    gfcp_mean,
    gfcp_pgf,
    gfcp_pmf,
    gfcp_variance,
    gsfcp_laplace,
    gsfcp_pgf,
    gsfcp_pmf,
    gstfcp_pmf,
    incgamma_gcp_laplace,
    incgamma_gcp_pgf,
    incgamma_gcp_pmf,
    incgamma_gcp_small_n,
    incgamma_tail_slope,
    sample_time_changed,
    tempered_corr_ratio,
    tempered_gcp_laplace,
    tempered_gcp_moments,
    tempered_gcp_pgf,
    tempered_gcp_pmf,
    tempered_gcp_small_n,
    tempered_tail_slope,
)

P = GcpParams.of(0.7, 0.3)


@pytest.mark.parametrize("n", range(6))
def test_unit_index_clocks_reduce_to_gcp(n):
    assert gsfcp_pmf(P, 1.0, n, 1.5) == pytest.approx(gcp_pmf(P, n, 1.5), rel=1e-10)
    assert gfcp_pmf(P, 1.0, n, 1.5) == pytest.approx(gcp_pmf(P, n, 1.5), rel=1e-9)
    assert gstfcp_pmf(P, 0.7, 1.0, n, 1.0) == pytest.approx(gsfcp_pmf(P, 0.7, n, 1.0), rel=1e-10)


def test_zero_count_matches_transforms():
    assert gsfcp_pmf(P, 0.7, 0, 1.0) == pytest.approx(float(gsfcp_pgf(P, 0.7, 0.0, 1.0)), rel=1e-12)
    assert gfcp_pmf(P, 0.7, 0, 1.0) == pytest.approx(gfcp_pgf(P, 0.7, 0.0, 1.0), rel=1e-10)
    assert incgamma_gcp_pmf(P, 0.6, 1.0, 0, 1.0) == pytest.approx(float(incgamma_gcp_pgf(P, 0.6, 1.0, 0.0, 1.0)))
    assert tempered_gcp_pmf(P, 0.6, 1.0, 0, 1.0) == pytest.approx(float(tempered_gcp_pgf(P, 0.6, 1.0, 0.0, 1.0)))
    assert gsfcp_laplace(P, 0.7, 0.0, 1.0) == 1.0
    assert incgamma_gcp_laplace(P, 0.6, 1.0, 0.0, 1.0) == 1.0


def test_small_count_closed_forms_match_jets():
    for n, closed in enumerate(incgamma_gcp_small_n(P, 0.6, 1.0, 1.0)):
        assert incgamma_gcp_pmf(P, 0.6, 1.0, n, 1.0) == pytest.approx(closed, rel=1e-10)
    for n, closed in enumerate(tempered_gcp_small_n(P, 0.6, 1.0, 1.0)):
        assert tempered_gcp_pmf(P, 0.6, 1.0, n, 1.0) == pytest.approx(closed, rel=1e-10)


def test_light_tailed_pmfs_sum_to_one():
    total = math.fsum(tempered_gcp_pmf(P, 0.6, 1.0, n, 1.0) for n in range(30))
    assert total == pytest.approx(1.0, abs=1e-6)
    total = math.fsum(gfcp_pmf(P, 0.7, n, 1.0) for n in range(30))
    assert total == pytest.approx(1.0, abs=1e-6)


def test_gfcp_moments():
    assert gfcp_mean(P, 1.0, 2.0) == pytest.approx(P.c1 * 2.0)
    assert gfcp_variance(P, 1.0, 2.0) == pytest.approx(P.c2 * 2.0, rel=1e-12)
    assert gfcp_cov(P, 0.7, 1.0, 1.0) == pytest.approx(gfcp_variance(P, 0.7, 1.0))
    with pytest.raises(OrderError):
        gfcp_cov(P, 0.7, 2.0, 1.0)


def test_long_range_dependence_ratio():
    assert tempered_corr_ratio(P, 0.6, 1.0, 1.0, 1e6) == pytest.approx(1.0, abs=0.01)


def test_tempered_moments_against_sampler():
    spec = ClockSpec(kind=ClockKind.TEMPERED_INC_GAMMA, alpha=0.6, theta=1.0)
    counts = sample_time_changed(P, spec, 2.0, np.random.default_rng(42), 200_000)
    expected = tempered_gcp_moments(P, 0.6, 1.0, 2.0, 2.0)
    assert mean_estimate(counts).within(expected.mean)
    assert variance_estimate(counts).within(expected.var)


def test_incgamma_tail_slope_is_minus_alpha():
    engine = MonteCarloEngine(seed=2024, workers=2)
    slope = incgamma_tail_slope(P, 0.5, 1.0, (1e2, 3e2, 1e3, 3e3, 1e4), 1.0, 200_000, engine)
    assert slope == pytest.approx(-0.5, abs=0.1)


def test_incgamma_tail_slope_near_unit_index():
    engine = MonteCarloEngine(seed=2024, workers=2)
    slope = incgamma_tail_slope(P, 0.9, 1.0, (1e2, 3e2, 1e3, 3e3, 1e4), 10.0, 1_000_000, engine)
    assert slope == pytest.approx(-0.9, abs=0.1)


def test_tempered_tail_slope_keeps_power_law_for_tiny_theta():
    engine = MonteCarloEngine(seed=2024, workers=2)
    slope = tempered_tail_slope(P, 0.5, 1e-9, (1e2, 3e2, 1e3, 3e3, 1e4), 1.0, 200_000, engine)
    assert slope == pytest.approx(-0.5, abs=0.1)


def test_subordinated_pgfs_reject_points_outside_unit_disc():
    with pytest.raises(DomainError):
        gsfcp_pgf(P, 0.7, 1.5, 1.0)
    with pytest.raises(DomainError):
        gfcp_pgf(P, 0.7, -1.2, 1.0)
    with pytest.raises(DomainError):
        incgamma_gcp_pgf(P, 0.6, 1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        tempered_gcp_pgf(P, 0.6, 1.0, np.array([0.5, 1.01]), 1.0)
    assert gfcp_pgf(P, 0.7, 1.0, 1.0) == pytest.approx(1.0)


def test_index_validation():
    with pytest.raises(DomainError):
        gsfcp_pmf(P, 1.5, 1, 1.0)
    with pytest.raises(DomainError):
        incgamma_gcp_pmf(P, 1.0, 1.0, 1, 1.0)
    with pytest.raises(DomainError):
        tempered_gcp_pmf(P, 0.6, 0.0, 1, 1.0)


def test_tempered_laplace_is_the_pgf_at_exp_argument():
    for s in (0.0, 0.4, 1.5):
        expected = tempered_gcp_pgf(P, 0.6, 1.0, math.exp(-s), 2.0)
        assert tempered_gcp_laplace(P, 0.6, 1.0, s, 2.0) == pytest.approx(float(expected), rel=1e-12)
    with pytest.raises(DomainError):
        tempered_gcp_laplace(P, 0.6, 1.0, -0.1, 2.0)
