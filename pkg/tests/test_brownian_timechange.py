import math

import pytest

from src.errors import DomainError, InfiniteMomentError
from src.models.experiment import ElasticMethod
from src.models.params import GcpParams
from src.processes.brownian_timechange import (
    bessel_moments,
    bessel_pgf,
    bessel_pmf,
    elastic_pgf,
    elastic_pmf,
    fp_ode_residual,
    fp_pgf,
    fp_pmf,
    fpd_moments,
    fpd_ode_residual,
    fpd_pgf,
    fpd_pmf,
    sojourn_moments,
    sojourn_pgf,
    sojourn_pgf_bessel,
    sojourn_pmf,
)

P = GcpParams.of(0.7, 0.3)


def test_bessel_example_value():
    assert bessel_pmf(GcpParams.of(1.0), 2.0, 0, 1.0) == pytest.approx(1.0 / 3.0, rel=1e-12)


@pytest.mark.parametrize(
    "pmf, pgf",
    [
        (lambda t: fp_pmf(P, 0, t), lambda t: fp_pgf(P, 0.0, t)),
        (lambda t: fpd_pmf(P, 0.5, 0, t), lambda t: fpd_pgf(P, 0.5, 0.0, t)),
        (lambda t: fpd_pmf(P, -0.5, 0, t), lambda t: fpd_pgf(P, -0.5, 0.0, t)),
        (lambda t: bessel_pmf(P, 3.0, 0, t), lambda t: bessel_pgf(P, 3.0, 0.0, t)),
        (lambda t: sojourn_pmf(P, 0, t), lambda t: sojourn_pgf(P, 0.0, t)),
        (lambda t: elastic_pmf(P, 1.5, 0, t), lambda t: elastic_pgf(P, 1.5, 0.0, t)),
    ],
    ids=["fp", "fpd+", "fpd-", "bessel", "sojourn", "elastic"],
)
def test_zero_count_matches_pgf_at_origin(pmf, pgf):
    for t in (0.5, 2.0):
        assert pmf(t) == pytest.approx(float(pgf(t)), rel=1e-9)


def test_pgfs_are_normalized():
    assert fp_pgf(P, 1.0, 2.0) == pytest.approx(1.0)
    assert bessel_pgf(P, 2.0, 1.0, 2.0) == pytest.approx(1.0)
    assert sojourn_pgf(P, 1.0, 2.0) == pytest.approx(1.0)
    assert elastic_pgf(P, 1.5, 1.0, 2.0) == pytest.approx(1.0)
    assert fpd_pgf(P, -0.5, 1.0, 1.0) == pytest.approx(math.exp(-1.0))


@pytest.mark.parametrize("u", [-0.5, 0.3, 0.9])
def test_sojourn_pgf_forms_agree(u):
    assert float(sojourn_pgf_bessel(P, u, 1.0)) == pytest.approx(sojourn_pgf(P, u, 1.0), abs=1e-10)


@pytest.mark.parametrize("n", range(5))
def test_first_passage_forward_equations(n):
    h = 1e-3
    assert abs(fp_ode_residual(P, n, 1.0, h)) / fp_pmf(P, n, 1.0) < 1e-4
    assert abs(fpd_ode_residual(P, 0.5, n, 1.0, h)) / fpd_pmf(P, 0.5, n, 1.0) < 1e-4


@pytest.mark.parametrize("n", range(5))
def test_elastic_series_matches_quadrature(n):
    series = elastic_pmf(P, 1.5, n, 1.0, ElasticMethod.SERIES)
    assert series == pytest.approx(elastic_pmf(P, 1.5, n, 1.0, ElasticMethod.QUADRATURE), abs=1e-6)
    assert series == pytest.approx(elastic_pmf(P, 1.5, n, 1.0, ElasticMethod.DERIVATIVE), abs=1e-6)


def test_elastic_equal_rate_form():
    p = GcpParams.of(0.7, 0.3)
    for n in range(4):
        assert elastic_pmf(p, 1.0, n, 1.0, ElasticMethod.EQUAL_RATE) == pytest.approx(
            elastic_pmf(p, 1.0, n, 1.0, ElasticMethod.QUADRATURE), abs=1e-6
        )
    with pytest.raises(DomainError):
        elastic_pmf(P, 1.5, 1, 1.0, ElasticMethod.EQUAL_RATE)
    with pytest.raises(DomainError):
        elastic_pmf(p, 1.0, 1, 1.0, ElasticMethod.DERIVATIVE)


def test_moment_formulas():
    t = 1.5
    fpd = fpd_moments(P, 0.5, t)
    assert fpd.mean == pytest.approx(P.c1 * t / 0.5)
    assert fpd.var == pytest.approx((P.c2 + (P.c1 / 0.5) ** 2) * t / 0.5)
    bessel = bessel_moments(P, 2.0, t)
    assert bessel.mean == pytest.approx(P.c1 * 2.0 * t)
    # E M(M-1) = var + mean^2 - mean
    assert bessel.factorial_moment2 == pytest.approx(bessel.var + bessel.mean**2 - bessel.mean)
    sojourn = sojourn_moments(P, t)
    assert sojourn.mean == pytest.approx(0.5 * P.c1 * t)
    assert sojourn.factorial_moment2 == pytest.approx(sojourn.var + sojourn.mean**2 - sojourn.mean)
    with pytest.raises(InfiniteMomentError):
        fpd_moments(P, 0.0, t)


def test_invalid_arguments():
    with pytest.raises(DomainError):
        fp_pmf(P, -1, 1.0)
    with pytest.raises(DomainError):
        bessel_pmf(P, 0.0, 1, 1.0)
    with pytest.raises(DomainError):
        fp_pgf(P, 1.2, 1.0)
