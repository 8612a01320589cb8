import numpy as np
import pytest

from src.errors import ConditioningError, DomainError
from src.models.params import GcpParams
from src.models.paths import StepPath
from src.montecarlo.estimators import mean_estimate, variance_estimate
from src.processes.fracint import (
    fracint_conditional_mean,
    fracint_gcp_moments,
    fracint_gfcp_mean,
    fracint_gfcp_variance,
    gfcp_step_path,
    rl_integral_jumps,
    rl_integral_step,
    sample_gcp_rl_integrals,
)
from src.processes.gcp_core import simulate_gcp

P = GcpParams.of(0.7, 0.3)


def test_single_jump_integral():
    path = StepPath(np.array([0.5]), np.array([2]), 1.0)
    assert rl_integral_step(path, 1.0, 1.0) == pytest.approx(1.0)
    assert rl_integral_step(path, 1.0, 0.25) == 0.0


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_step_and_jump_forms_agree(a):
    path = simulate_gcp(P, 3.0, np.random.default_rng(12))
    assert rl_integral_step(path, a, 2.0) == pytest.approx(rl_integral_jumps(path.epochs, path.sizes, a, 2.0), rel=1e-12)


def test_gcp_integral_moments_against_sampler():
    a, t = 0.5, 2.0
    rows = sample_gcp_rl_integrals(P, a, t, np.random.default_rng(31), 200_000)
    expected = fracint_gcp_moments(P, a, t)
    assert mean_estimate(rows[:, 0]).within(expected.mean)
    assert variance_estimate(rows[:, 0]).within(expected.var)
    assert fracint_gcp_moments(P, 1.0, t).mean == pytest.approx(P.c1 * t**2 / 2.0)


def test_conditional_mean_for_a_single_jump():
    assert fracint_conditional_mean(GcpParams.of(1.0), 1.0, 1, 1.0) == pytest.approx(0.5, rel=1e-12)


def test_conditional_mean_against_rejection():
    a, t, n = 1.0, 1.0, 2
    rows = sample_gcp_rl_integrals(P, a, t, np.random.default_rng(77), 200_000)
    kept = rows[rows[:, 1] == n, 0]
    assert mean_estimate(kept).within(fracint_conditional_mean(P, a, n, t))


def test_conditioning_on_impossible_count():
    with pytest.raises(ConditioningError):
        fracint_conditional_mean(GcpParams.of(0.0, 1.0), 1.0, 1, 1.0)


def test_gfcp_moments_approach_gcp_as_beta_tends_to_one():
    assert fracint_gfcp_mean(P, 1.0, 1.0, 1.0) == pytest.approx(fracint_gcp_moments(P, 1.0, 1.0).mean)
    assert fracint_gfcp_variance(P, 1.0, 0.999, 1.0) == pytest.approx(fracint_gcp_moments(P, 1.0, 1.0).var, rel=1e-2)


def test_gfcp_step_path_stays_inside_horizon():
    path = gfcp_step_path(P, 0.7, 2.0, 0.01, np.random.default_rng(6))
    assert path.horizon == 2.0
    if path.epochs.size:
        assert path.epochs[-1] <= 2.0
        assert np.all(np.diff(path.epochs) > 0)


def test_order_must_be_positive():
    path = StepPath.empty(1.0)
    with pytest.raises(DomainError):
        rl_integral_step(path, 0.0, 1.0)
    with pytest.raises(DomainError):
        rl_integral_step(path, 1.0, 2.0)
