import math

import numpy as np
import pytest

from src.errors import DomainError
from src.models.params import GcpParams
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.estimators import laplace_estimate
from src.processes.drifted_gcp import (
    atom_laplace,
    drifted_laplace,
    drifted_laplace_ode_residual,
    drifted_law,
    gstfcp_drift_laplace,
    hitting_boundary_laplace_gap,
    hitting_boundary_series,
    hitting_duality,
    hitting_duality_gap,
    sample_gstfcp_drift,
    sample_hitting_time,
)
from src.processes.gcp_core import laplace_exponent
from src.processes.subordinated_gcp import gsfcp_laplace

P = GcpParams.of(0.7, 0.3)


def test_drifted_law_is_a_shifted_gcp():
    law = drifted_law(P, 0.5, 1.0)
    assert law.total_mass() == pytest.approx(1.0, abs=1e-7)
    assert law.atoms[0][0] == pytest.approx(0.5)
    for s in (0.5, 1.0, 2.0):
        assert atom_laplace(law, s) == pytest.approx(drifted_laplace(P, 0.5, s, 1.0), abs=1e-7)


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_drifted_transform_solves_its_ode(s):
    residual = drifted_laplace_ode_residual(P, 0.5, s, 1.0, 1e-3)
    assert abs(residual) / drifted_laplace(P, 0.5, s, 1.0) < 1e-4


def test_stable_drift_transform_reductions():
    for eta in (0.5, 1.0, 2.0):
        assert gstfcp_drift_laplace(P, 0.0, 0.6, 0.7, 1.0, eta, 1.0) == pytest.approx(
            gsfcp_laplace(P, 0.7, eta, 1.0), rel=1e-12
        )
        expected = math.exp(-2.0 * ((0.5 * eta) ** 0.6 + float(laplace_exponent(P, eta))))
        assert gstfcp_drift_laplace(P, 0.5, 0.6, 1.0, 1.0, eta, 2.0) == pytest.approx(expected, rel=1e-12)


def test_stable_drift_sampler_matches_transform():
    values = sample_gstfcp_drift(P, 0.5, 0.6, 0.7, 0.8, 1.0, np.random.default_rng(8), 100_000)
    for eta in (0.5, 1.0, 2.0):
        assert laplace_estimate(values, eta).within(gstfcp_drift_laplace(P, 0.5, 0.6, 0.7, 0.8, eta, 1.0))


def test_boundary_series_starts_at_rate_power():
    assert hitting_boundary_series(P, 0.7, 0.5, 300) == pytest.approx(P.total_rate**0.7)
    assert hitting_boundary_series(P, 0.7, 3.0, 300) < P.total_rate**0.7


@pytest.mark.parametrize("eta", [0.5, 1.0, 2.0])
def test_boundary_series_laplace_transform(eta):
    assert hitting_boundary_laplace_gap(P, 0.7, eta, t_max=60.0) < 1e-3


def test_hitting_times_live_on_the_grid():
    times = sample_hitting_time(P, 0.5, 0.6, 0.7, 2.0, 0.01, np.random.default_rng(5), 1000)
    assert np.all(times > 0)
    assert np.allclose(np.round(times / 0.01) * 0.01, times)


def test_hitting_duality_gap_is_small():
    engine = MonteCarloEngine(seed=99, workers=2)
    estimate = hitting_duality(P, 0.5, 0.6, 0.7, 1.0, 2.0, 20_000, 0.01, engine)
    assert estimate.gap.value < 0.03
    assert 0.0 < estimate.survival.value < 1.0


def test_duality_needs_grid_multiple():
    engine = MonteCarloEngine(seed=1)
    with pytest.raises(DomainError):
        hitting_duality(P, 0.5, 0.6, 0.7, 1.005, 2.0, 100, 0.01, engine)
    with pytest.raises(DomainError):
        drifted_law(P, -0.1, 1.0)


def test_duality_gap_shortcut_repeats_the_full_estimate():
    full = hitting_duality(P, 0.5, 0.6, 0.7, 1.0, 2.0, 2_000, 0.01, MonteCarloEngine(seed=5))
    gap = hitting_duality_gap(P, 0.5, 0.6, 0.7, 1.0, 2.0, 2_000, MonteCarloEngine(seed=5), grid_step=0.01)
    assert gap == full.gap.value
