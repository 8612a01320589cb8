"""GCP time-changed by Brownian clocks.

Every pmf here is the mixture sum_z A(n, z) E[T^z e^{-Lambda T}] over the
weights of gcp_core.omega_weights; each family only supplies the clock
moment m(z), in log space where it can overflow.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import betaln, erfcx, gammaln, ive

from src.errors import ConvergenceError, DomainError, InfiniteMomentError, QuadratureError
from src.models.experiment import ElasticMethod
from src.models.outputs import MomentRecord
from src.models.params import GcpParams
from src.processes.clocks import elastic_density, elastic_q
from src.processes.gcp_core import compose_log_pmf, compose_pmf, gcp_pmf, rate_exponent
from src.specfun.functions import kummer1f1, log_bessel_k_halfint
from src.specfun.jets import TaylorJet
from src.specfun.mittag_leffler import ml3

_SERIES_MAX_TERMS = 500


def _check(n: int, t: float) -> None:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")


def _check_disc(u: float | np.ndarray) -> None:
    if np.any(np.abs(np.asarray(u)) > 1):
        raise DomainError("pgf argument must satisfy |u| <= 1")


def _second_difference(f, t: float, h: float) -> tuple[float, float]:
    """(f'', f') at t by central differences."""
    if not t > h > 0:
        raise DomainError(f"need t > h > 0, got t={t}, h={h}")
    up, mid, down = f(t + h), f(t), f(t - h)
    return (up - 2.0 * mid + down) / h**2, (up - down) / (2.0 * h)


def _shift_sum(p: GcpParams, n: int, pmf) -> float:
    return math.fsum(p.rates[j - 1] * pmf(n - j) for j in range(1, min(n, p.k) + 1))


# first passage


def fp_pmf(p: GcpParams, n: int, t: float) -> float:
    _check(n, t)
    lam = p.total_rate
    arg = t * math.sqrt(2.0 * lam)

    def log_moment(z: int) -> float:
        return (
            (z + 0.5) * math.log(t)
            + (0.25 - 0.5 * z) * math.log(lam)
            + (0.75 - 0.5 * z) * math.log(2.0)
            - 0.5 * math.log(math.pi)
            + log_bessel_k_halfint(z, arg)
        )

    return math.exp(compose_log_pmf(p, n, log_moment))


def fp_pgf(p: GcpParams, u: float | np.ndarray, t: float) -> float | np.ndarray:
    _check_disc(u)
    return np.exp(-t * np.sqrt(2.0 * rate_exponent(p, u)))


def fp_ode_residual(p: GcpParams, n: int, t: float, h: float) -> float:
    """p'' - 2(Lambda p(n) - sum_j lambda_j p(n - j)) by central differences."""
    second, _ = _second_difference(lambda s: fp_pmf(p, n, s), t, h)
    rhs = 2.0 * (p.total_rate * fp_pmf(p, n, t) - _shift_sum(p, n, lambda m: fp_pmf(p, m, t)))
    return second - rhs


# first passage with drift


def fpd_pmf(p: GcpParams, mu: float, n: int, t: float) -> float:
    """Defective for mu < 0, with total mass e^{2 mu t}."""
    _check(n, t)
    lam = p.total_rate
    rate = 2.0 * lam + mu * mu
    arg = t * math.sqrt(rate)

    def log_moment(z: int) -> float:
        return (
            0.5 * math.log(2.0 / math.pi)
            + math.log(t)
            + mu * t
            + (0.5 * z - 0.25) * math.log(t * t / rate)
            + log_bessel_k_halfint(z, arg)
        )

    return math.exp(compose_log_pmf(p, n, log_moment))


def fpd_pgf(p: GcpParams, mu: float, u: float | np.ndarray, t: float) -> float | np.ndarray:
    _check_disc(u)
    return np.exp(mu * t - t * np.sqrt(mu * mu + 2.0 * rate_exponent(p, u)))


def fpd_moments(p: GcpParams, mu: float, t: float) -> MomentRecord:
    if mu <= 0:
        raise InfiniteMomentError(f"mean and variance are infinite for mu <= 0, got mu={mu}")
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    return MomentRecord(mean=p.c1 * t / mu, var=(p.c2 + (p.c1 / mu) ** 2) * t / mu)


def fpd_ode_residual(p: GcpParams, mu: float, n: int, t: float, h: float) -> float:
    """p'' - 2 mu p' - 2(Lambda p(n) - sum_j lambda_j p(n - j))."""
    second, first = _second_difference(lambda s: fpd_pmf(p, mu, n, s), t, h)
    rhs = 2.0 * (p.total_rate * fpd_pmf(p, mu, n, t) - _shift_sum(p, n, lambda m: fpd_pmf(p, mu, m, t)))
    return second - 2.0 * mu * first - rhs


# squared Bessel


def bessel_pmf(p: GcpParams, gamma_dim: float, n: int, t: float) -> float:
    _check(n, t)
    if gamma_dim <= 0:
        raise DomainError(f"gamma_dim must be positive, got {gamma_dim}")
    half = gamma_dim / 2.0
    log_base = math.log(2.0 * p.total_rate * t + 1.0)

    def log_moment(z: int) -> float:
        return z * math.log(2.0 * t) + gammaln(z + half) - gammaln(half) - (z + half) * log_base

    return math.exp(compose_log_pmf(p, n, log_moment))


def bessel_pgf(p: GcpParams, gamma_dim: float, u: float | np.ndarray, t: float) -> float | np.ndarray:
    _check_disc(u)
    return (1.0 + 2.0 * t * rate_exponent(p, u)) ** (-gamma_dim / 2.0)


def bessel_factorial_moment2(p: GcpParams, gamma_dim: float, t: float) -> float:
    return (p.c2 - p.c1) * gamma_dim * t + p.c1**2 * (2.0 * gamma_dim + gamma_dim**2) * t**2


def bessel_moments(p: GcpParams, gamma_dim: float, t: float) -> MomentRecord:
    return MomentRecord(
        mean=p.c1 * gamma_dim * t,
        var=p.c2 * gamma_dim * t + 2.0 * gamma_dim * (p.c1 * t) ** 2,
        factorial_moment2=bessel_factorial_moment2(p, gamma_dim, t),
    )


# arcsine sojourn


def sojourn_pmf(p: GcpParams, n: int, t: float) -> float:
    _check(n, t)
    lam = p.total_rate

    def log_moment(z: int) -> float:
        return (
            z * math.log(t)
            - math.log(math.pi)
            - lam * t
            + betaln(0.5, z + 0.5)
            + math.log(kummer1f1(0.5, z + 1.0, lam * t))
        )

    return math.exp(compose_log_pmf(p, n, log_moment))


def sojourn_pgf(p: GcpParams, u: float, t: float) -> float:
    _check_disc(u)
    return kummer1f1(0.5, 1.0, -float(rate_exponent(p, u)) * t)


def sojourn_pgf_bessel(p: GcpParams, u: float | np.ndarray, t: float) -> float | np.ndarray:
    """exp(-w/2) I_0(w/2) with w = t sum_j lambda_j (1 - u^j); accepts complex u."""
    _check_disc(u)
    half = 0.5 * t * rate_exponent(p, u)
    # ive scales by exp(-|Re z|); restore the imaginary phase
    return ive(0, half) * np.exp(-1j * np.imag(half)) if np.iscomplexobj(half) else ive(0, half)


def sojourn_factorial_moment2(p: GcpParams, t: float) -> float:
    return 0.375 * (p.c1 * t) ** 2 + 0.5 * (p.c2 - p.c1) * t


def sojourn_moments(p: GcpParams, t: float) -> MomentRecord:
    return MomentRecord(
        mean=0.5 * p.c1 * t,
        var=0.125 * (p.c1 * t) ** 2 + 0.5 * p.c2 * t,
        factorial_moment2=sojourn_factorial_moment2(p, t),
    )


# elastic


def _elastic_scales(p: GcpParams, gamma_el: float, t: float) -> tuple[float, float, float]:
    if gamma_el <= 0:
        raise DomainError(f"gamma_el must be positive, got {gamma_el}")
    x = math.sqrt(t / 2.0)
    return x, p.total_rate * x, gamma_el * x


def _alternating_series(term, label: str) -> float:
    total = 0.0
    terms: list[float] = []
    for r in range(_SERIES_MAX_TERMS):
        value = term(r)
        terms.append(value)
        total = math.fsum(terms)
        if r > 2 and abs(value) <= 1e-16 * max(abs(total), 1e-300):
            return total
    raise ConvergenceError(f"{label} series did not settle within {_SERIES_MAX_TERMS} terms")


def _elastic_moments_series(x: float, y: float, g: float, z_max: int) -> np.ndarray:
    moments = np.zeros(z_max + 1)
    for z in range(z_max + 1):
        inner = _alternating_series(lambda r: (-g) ** r * ml3(0.5, 0.5 * (r + z) + 1.0, z + 1.0, -y), "elastic")
        moments[z] = math.factorial(z) * x**z * inner
    return moments


def _elastic_moments_equal_rate(x: float, y: float, z_max: int) -> np.ndarray:
    moments = np.zeros(z_max + 1)
    moments[0] = erfcx(y) - y * ml3(0.5, 1.5, 2.0, -y)
    for z in range(1, z_max + 1):
        moments[z] = math.factorial(z) * x**z * ml3(0.5, 0.5 * z + 1.0, z + 2.0, -y)
    return moments


def _elastic_moments_derivative(lam: float, gamma_el: float, x: float, z_max: int) -> np.ndarray:
    y = lam * x
    # reflected jet of P(c) = E_{1/2,1}(-c x): coefficient r is x^r E^{r+1}_{1/2,1+r/2}(-y)
    survival = TaylorJet(lam, [x**r * ml3(0.5, 1.0 + 0.5 * r, r + 1.0, -y) for r in range(z_max + 1)])
    rate = TaylorJet.variable(lam, z_max, direction=-1.0)
    alive = (rate * survival - gamma_el * erfcx(gamma_el * x)) / (rate - gamma_el)
    return alive.derivatives()


def elastic_continuous_moments(
    p: GcpParams, gamma_el: float, t: float, z_max: int, method: ElasticMethod | str = ElasticMethod.SERIES
) -> np.ndarray:
    """E[T^z e^{-Lambda T}; T not absorbed] for z = 0..z_max."""
    method = ElasticMethod(method)
    x, y, g = _elastic_scales(p, gamma_el, t)
    equal = math.isclose(p.total_rate, gamma_el, rel_tol=1e-12)
    if method == ElasticMethod.EQUAL_RATE:
        if not equal:
            raise DomainError("the equal-rate form needs Lambda == gamma_el")
        return _elastic_moments_equal_rate(x, y, z_max)
    if method == ElasticMethod.DERIVATIVE:
        if equal:
            raise DomainError("the derivative form needs Lambda != gamma_el")
        return _elastic_moments_derivative(p.total_rate, gamma_el, x, z_max)
    if method == ElasticMethod.SERIES:
        return _elastic_moments_series(x, y, g, z_max)
    raise DomainError("quadrature works on the pmf, not on clock moments")


def elastic_pmf(
    p: GcpParams, gamma_el: float, n: int, t: float, method: ElasticMethod | str = ElasticMethod.SERIES
) -> float:
    _check(n, t)
    method = ElasticMethod(method)
    atom = elastic_q(gamma_el, t) if n == 0 else 0.0
    if method == ElasticMethod.QUADRATURE:
        return atom + _elastic_quadrature(p, gamma_el, n, t)
    moments = elastic_continuous_moments(p, gamma_el, t, n, method)
    return atom + compose_pmf(p, n, lambda z: moments[z])


def _elastic_quadrature(p: GcpParams, gamma_el: float, n: int, t: float) -> float:
    value, error = integrate.quad(
        lambda s: gcp_pmf(p, n, s) * elastic_density(gamma_el, s, t),
        0.0,
        np.inf,
        epsabs=1e-13,
        epsrel=1e-11,
        limit=400,
    )
    if error > 1e-9:
        raise QuadratureError(f"elastic quadrature error estimate {error:.2e} too large")
    return value


def elastic_pgf(p: GcpParams, gamma_el: float, u: float, t: float) -> float:
    """1 - P(gamma) + [w P(w) - gamma P(gamma)] / (w - gamma) at w = sum_j lambda_j (1 - u^j)."""
    _check_disc(u)
    x = math.sqrt(t / 2.0)
    w = float(rate_exponent(p, u))
    kept = erfcx(gamma_el * x)
    if abs(w - gamma_el) < 1e-6 * max(gamma_el, 1.0):
        alive = _alternating_series(lambda r: (-gamma_el * x) ** r * ml3(0.5, 0.5 * r + 1.0, 1.0, -w * x), "elastic pgf")
    else:
        alive = (w * erfcx(w * x) - gamma_el * kept) / (w - gamma_el)
    return 1.0 - kept + alive
