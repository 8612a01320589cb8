import math

import numpy as np
import pytest
from scipy.stats import poisson

from src.errors import CapExceededError, DomainError, OrderError
from src.models.params import GcpParams
from src.montecarlo.estimators import mean_estimate, variance_estimate
from src.processes.gcp_core import (
    compose_pmf,
    enumerate_omega,
    gcp_mgf,
    gcp_moments,
    gcp_ode_residual,
    gcp_pgf,
    gcp_pmf,
    gcp_pmf_table,
    gcp_truncation,
    omega_weights,
    sample_gcp_at,
    simulate_gcp,
)

P = GcpParams.of(0.7, 0.3)


def test_enumerate_omega_lists_compositions_in_order():
    solutions = enumerate_omega(2, 4)
    assert [c.x for c in solutions] == [(4, 0), (2, 1), (0, 2)]
    assert all(c.target() == 4 for c in solutions)
    assert [c.weight for c in solutions] == [4, 3, 2]
    assert len(enumerate_omega(3, 0)) == 1


def test_enumerate_omega_cap():
    with pytest.raises(CapExceededError) as excinfo:
        enumerate_omega(3, 10, cap=2)
    assert excinfo.value.count == 3


def test_gcp_pmf_example_value():
    assert gcp_pmf(GcpParams.of(1.0, 1.0), 2, 1.0) == pytest.approx(0.203003, abs=1e-6)


def test_single_rate_is_poisson():
    p = GcpParams.of(2.5)
    for n in range(10):
        assert gcp_pmf(p, n, 1.3) == pytest.approx(poisson.pmf(n, 2.5 * 1.3), rel=1e-12)


def test_panjer_table_matches_composition_formula():
    table = gcp_pmf_table(P, 25, 2.0)
    direct = np.array([gcp_pmf(P, n, 2.0) for n in range(26)])
    assert np.allclose(table, direct, rtol=1e-12, atol=0)


def test_zero_rates_are_skipped():
    p = GcpParams.of(0.0, 1.0)
    assert gcp_pmf(p, 3, 1.0) == 0.0
    assert gcp_pmf(p, 4, 1.0) == pytest.approx(poisson.pmf(2, 1.0), rel=1e-12)
    assert set(omega_weights(p, 4)) == {2}


def test_compose_pmf_with_unit_clock_matches_pmf():
    lam = P.total_rate
    value = compose_pmf(P, 3, lambda z: math.exp(-lam))
    assert value == pytest.approx(gcp_pmf(P, 3, 1.0), rel=1e-12)


def test_normalization_within_truncation():
    t = 2.0
    n_max = gcp_truncation(P, t, 1e-10)
    assert math.fsum(gcp_pmf_table(P, n_max, t)) == pytest.approx(1.0, abs=1e-9)


def test_pmf_edge_cases():
    assert gcp_pmf(P, 0, 0.0) == 1.0
    assert gcp_pmf(P, 3, 0.0) == 0.0
    with pytest.raises(DomainError):
        gcp_pmf(P, -1, 1.0)
    with pytest.raises(DomainError):
        gcp_pmf(P, 1, -0.5)


def test_pgf_and_moments():
    assert gcp_pgf(P, 1.0, 3.0) == pytest.approx(1.0)
    moments = gcp_moments(P, 1.0, 2.0)
    assert moments.mean == pytest.approx(P.c1 * 2.0)
    assert moments.var == pytest.approx(P.c2 * 2.0)
    assert moments.cov == pytest.approx(P.c2)
    with pytest.raises(OrderError):
        gcp_moments(P, 2.0, 1.0)
    with pytest.raises(DomainError):
        gcp_pgf(P, 1.5, 1.0)


@pytest.mark.parametrize("n", range(6))
def test_forward_equation_residual(n):
    scale = max(gcp_pmf(P, n, 1.0), 1e-12)
    assert abs(gcp_ode_residual(P, n, 1.0, 1e-3)) / scale < 1e-4


def test_marginal_sampler_matches_moments():
    rng = np.random.default_rng(20240601)
    counts = sample_gcp_at(P, np.full(100_000, 2.0), rng)
    assert mean_estimate(counts).within(P.c1 * 2.0)
    assert variance_estimate(counts).within(P.c2 * 2.0)


def test_simulated_path_is_well_formed():
    path = simulate_gcp(P, 5.0, np.random.default_rng(7))
    assert np.all(np.diff(path.epochs) > 0)
    assert set(path.sizes.tolist()) <= {1, 2}
    assert path.value_at(5.0) == path.sizes.sum()
    assert path.value_at(0.0) == 0


def test_mgf_is_the_pgf_at_exp_argument():
    p = GcpParams.of(0.7, 0.3)
    for eta in (0.0, 0.5, 2.0):
        assert gcp_mgf(p, -eta, 1.5) == pytest.approx(gcp_pgf(p, math.exp(-eta), 1.5), rel=1e-12)
    with pytest.raises(DomainError):
        gcp_mgf(p, 0.1, 1.0)
