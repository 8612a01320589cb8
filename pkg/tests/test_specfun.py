import math

import numpy as np
import pytest
from scipy.special import erfc, kv
from scipy.stats import poisson

from src.errors import ConvergenceError, DomainError, PoleError
from src.specfun.functions import (
    bessel_k_halfint,
    inc_beta,
    kummer1f1,
    log_bessel_k_halfint,
    lower_inc_gamma,
    lower_inc_gamma_complex,
)
from src.specfun.inversion import pgf_cdf, pgf_coefficients
from src.specfun.mittag_leffler import ml3, ml3_derivative, ml_taylor_coefficients


def test_kummer_reduces_to_exponential():
    assert kummer1f1(1.0, 1.0, 2.0) == pytest.approx(math.exp(2.0), rel=1e-12)
    assert kummer1f1(0.5, 1.5, 0.0) == 1.0


def test_kummer_transform_holds_for_negative_argument():
    a, b, x = 0.3, 1.7, -12.0
    assert kummer1f1(a, b, x) == pytest.approx(math.exp(x) * kummer1f1(b - a, b, -x), rel=1e-10)


@pytest.mark.parametrize("b", [0.0, -2.0])
def test_kummer_rejects_poles(b):
    with pytest.raises(PoleError):
        kummer1f1(1.0, b, 1.0)


@pytest.mark.parametrize("m", [0, 1, 2, 5])
@pytest.mark.parametrize("z", [0.5, 2.0, 10.0])
def test_half_integer_bessel_matches_scipy(m, z):
    assert bessel_k_halfint(m, z) == pytest.approx(kv(m - 0.5, z), rel=1e-12)


def test_log_bessel_stays_finite_at_high_order():
    assert log_bessel_k_halfint(60, 3.0) == pytest.approx(math.log(kv(59.5, 3.0)), rel=1e-10)
    # K_{999.5}(3) overflows a double; its log does not
    assert math.isfinite(log_bessel_k_halfint(1000, 3.0))


def test_bessel_rejects_non_positive_argument():
    with pytest.raises(DomainError):
        bessel_k_halfint(1, 0.0)


def test_mittag_leffler_special_cases():
    assert ml3(1.0, 1.0, 1.0, -2.5) == pytest.approx(math.exp(-2.5), rel=1e-12)
    assert ml3(0.7, 2.0, 1.3, 0.0) == pytest.approx(1.0, rel=1e-15)
    for x in (0.1, 1.0, 4.0):
        assert ml3(0.5, 1.0, 1.0, -x) == pytest.approx(math.exp(x * x) * erfc(x), rel=1e-10)


def test_mittag_leffler_refuses_arguments_outside_validated_range():
    with pytest.raises(ConvergenceError):
        ml3(0.5, 1.0, 1.0, -31.0)
    with pytest.raises(DomainError):
        ml3(0.0, 1.0, 1.0, 1.0)


def test_mittag_leffler_derivative_of_exponential():
    for m in range(4):
        assert ml3_derivative(1.0, 1.0, 1.0, m, 0.7) == pytest.approx(math.exp(0.7), rel=1e-10)


def test_mittag_leffler_derivative_matches_finite_difference():
    h = 1e-4
    numeric = (ml3(0.6, 1.0, 1.0, -1.0 + h) - ml3(0.6, 1.0, 1.0, -1.0 - h)) / (2.0 * h)
    assert ml3_derivative(0.6, 1.0, 1.0, 1, -1.0) == pytest.approx(numeric, rel=1e-6)


def test_taylor_coefficients_of_exponential():
    coeffs = ml_taylor_coefficients(1.0, 1.0, 0.5, 4)
    expected = [math.exp(0.5) / math.factorial(r) for r in range(5)]
    assert np.allclose(coeffs, expected, rtol=1e-12)


def test_incomplete_functions():
    assert lower_inc_gamma(1.0, 2.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)
    assert inc_beta(1.0, 1.0, 0.3) == pytest.approx(0.3, rel=1e-12)
    assert lower_inc_gamma_complex(0.6, 1.5).real == pytest.approx(lower_inc_gamma(0.6, 1.5), rel=1e-12)
    with pytest.raises(DomainError):
        lower_inc_gamma(0.5, -1.0)


def test_pgf_inversion_recovers_poisson():
    mean = 3.0
    coefficients = pgf_coefficients(lambda u: np.exp(mean * (u - 1.0)), 20)
    assert np.allclose(coefficients, poisson.pmf(np.arange(21), mean), atol=1e-11)
    assert pgf_cdf(lambda u: np.exp(mean * (u - 1.0)), 5) == pytest.approx(poisson.cdf(5, mean), abs=1e-10)


def test_pgf_inversion_validates_grid():
    with pytest.raises(DomainError):
        pgf_coefficients(lambda u: u, 10, points=8)
