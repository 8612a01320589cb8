from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.special import beta as beta_fn

from src.errors import DomainError, OrderError
from src.models.outputs import MomentRecord
from src.models.params import ClockSpec, GcpParams
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.estimators import survival_slope
from src.processes.clocks import (
    Size,
    sample_clock,
    sample_incgamma_at,
    sample_stable,
    sample_tempered_incgamma_at,
)
from src.processes.gcp_core import (
    check_unit_disc,
    compose_pmf,
    laplace_exponent,
    rate_exponent,
    sample_gcp_at,
)
from src.specfun.derivatives import PhiKind, exp_phi_jet, inverse_stable_mixture_jet
from src.specfun.functions import inc_beta, lower_inc_gamma, lower_inc_gamma_complex
from src.specfun.mittag_leffler import ml3


def _check_index(value: float, name: str, *, closed: bool = True) -> None:
    if not (0 < value < 1 or (closed and value == 1)):
        raise DomainError(f"{name} must lie in (0, 1{']' if closed else ')'}, got {value}")


def _check_nt(n: int, t: float) -> None:
    if n < 0 or t < 0:
        raise DomainError(f"need n >= 0 and t >= 0, got n={n}, t={t}")


def _jet_pmf(p: GcpParams, n: int, moments: np.ndarray) -> float:
    return compose_pmf(p, n, lambda z: float(moments[z]))


def sample_time_changed(
    p: GcpParams, spec: ClockSpec, t: float, rng: np.random.Generator, size: Size = None
) -> np.ndarray:
    """M(T(t)) with the clock drawn independently of the GCP."""
    clock = np.atleast_1d(sample_clock(spec, t, rng, size))
    return sample_gcp_at(p, clock, rng)


# stable and inverse stable clocks


def gsfcp_pmf(p: GcpParams, beta: float, n: int, t: float) -> float:
    """sum over Omega of coefficients times (-d/dLambda)^z exp(-t Lambda^beta)."""
    _check_index(beta, "beta")
    _check_nt(n, t)
    if t == 0:
        return 1.0 if n == 0 else 0.0
    return _jet_pmf(p, n, exp_phi_jet(PhiKind.STABLE_POWER, {"beta": beta}, t, p.total_rate, n))


def gsfcp_pgf(p: GcpParams, beta: float, u: float | np.ndarray, t: float) -> float | np.ndarray:
    check_unit_disc(u)
    return np.exp(-t * rate_exponent(p, u) ** beta)


def gsfcp_laplace(p: GcpParams, beta: float, s: float, t: float) -> float:
    return math.exp(-t * float(laplace_exponent(p, s)) ** beta)


def gfcp_pmf(p: GcpParams, beta: float, n: int, t: float) -> float:
    """GCP at the inverse stable clock: coefficients times (-d/dLambda)^z E_beta(-t^beta Lambda)."""
    _check_index(beta, "beta")
    _check_nt(n, t)
    if t == 0:
        return 1.0 if n == 0 else 0.0
    return _jet_pmf(p, n, inverse_stable_mixture_jet(beta, 1.0, t, p.total_rate, n))


def gfcp_pgf(p: GcpParams, beta: float, u: float, t: float) -> float:
    check_unit_disc(u)
    return ml3(beta, 1.0, 1.0, -(t**beta) * float(rate_exponent(p, u)))


def gfcp_mean(p: GcpParams, beta: float, t: float) -> float:
    _check_index(beta, "beta")
    return p.c1 * t**beta / math.gamma(beta + 1.0)


def gfcp_cov(p: GcpParams, beta: float, s: float, t: float) -> float:
    _check_index(beta, "beta")
    if s <= 0:
        raise DomainError(f"s must be positive, got {s}")
    if s > t:
        raise OrderError(f"covariance needs s <= t, got s={s}, t={t}")
    g1 = math.gamma(beta + 1.0)
    full = beta * beta_fn(beta, beta + 1.0) * s ** (2.0 * beta)
    partial = beta * t ** (2.0 * beta) * inc_beta(beta, beta + 1.0, s / t)
    return (p.c1 / g1) ** 2 * (full + partial - (t * s) ** beta) + p.c2 * s**beta / g1


def gfcp_variance(p: GcpParams, beta: float, t: float) -> float:
    return gfcp_cov(p, beta, t, t)


def gstfcp_pmf(p: GcpParams, gamma: float, beta: float, n: int, t: float) -> float:
    """GCP at D_gamma(Y_beta(t)); beta = 1 is gsfcp_pmf."""
    _check_index(gamma, "gamma")
    _check_index(beta, "beta")
    _check_nt(n, t)
    if t == 0:
        return 1.0 if n == 0 else 0.0
    return _jet_pmf(p, n, inverse_stable_mixture_jet(beta, gamma, t, p.total_rate, n))


# incomplete-gamma subordinator


def _incgamma_exponent(alpha: float, epsilon: float, w: float) -> float:
    return alpha * epsilon ** (-alpha) * lower_inc_gamma(alpha, w * epsilon)


def incgamma_gcp_laplace(p: GcpParams, alpha: float, epsilon: float, s: float, t: float) -> float:
    _check_index(alpha, "alpha", closed=False)
    if s < 0:
        raise DomainError("Laplace argument must be non-negative")
    return math.exp(-t * _incgamma_exponent(alpha, epsilon, float(laplace_exponent(p, s))))


def incgamma_gcp_pgf(p: GcpParams, alpha: float, epsilon: float, u: float | np.ndarray, t: float) -> float | np.ndarray:
    """Real u in [-1, 1], or complex u on a contour inside the unit disc."""
    _check_index(alpha, "alpha", closed=False)
    check_unit_disc(u)
    w = rate_exponent(p, u)
    if np.iscomplexobj(w):
        return np.exp(-t * alpha * epsilon ** (-alpha) * lower_inc_gamma_complex(alpha, w * epsilon))
    return np.exp(-t * _incgamma_exponent(alpha, epsilon, w))


def incgamma_gcp_pmf(p: GcpParams, alpha: float, epsilon: float, n: int, t: float) -> float:
    _check_index(alpha, "alpha", closed=False)
    _check_nt(n, t)
    moments = exp_phi_jet(PhiKind.INCGAMMA, {"alpha": alpha, "epsilon": epsilon}, t, p.total_rate, n)
    return _jet_pmf(p, n, moments)


def incgamma_gcp_small_n(p: GcpParams, alpha: float, epsilon: float, t: float) -> tuple[float, float, float]:
    """Closed forms of p(0), p(1), p(2)."""
    lam = p.total_rate
    l1 = p.rates[0]
    l2 = p.rates[1] if p.k > 1 else 0.0
    exponent = t * _incgamma_exponent(alpha, epsilon, lam)
    base = math.exp(-exponent - lam * epsilon)
    p0 = math.exp(-exponent)
    p1 = l1 * alpha * t * lam ** (alpha - 1.0) * base
    bracket = (
        l1**2 * lam * epsilon
        - l1**2 * (alpha - 1.0)
        + 2.0 * l2 * lam
        + l1**2 * lam**alpha * math.exp(-lam * epsilon) * alpha * t
    )
    p2 = 0.5 * alpha * t * lam ** (alpha - 2.0) * base * bracket
    return p0, p1, p2


# tempered incomplete-gamma subordinator


def _tempered_exponent(alpha: float, theta: float, w: float) -> float:
    return alpha * (lower_inc_gamma(alpha, w + theta) - lower_inc_gamma(alpha, theta))


def _check_tempered(alpha: float, theta: float) -> None:
    _check_index(alpha, "alpha", closed=False)
    if theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")


def tempered_gcp_laplace(p: GcpParams, alpha: float, theta: float, s: float, t: float) -> float:
    _check_tempered(alpha, theta)
    if s < 0:
        raise DomainError("Laplace argument must be non-negative")
    return math.exp(-t * _tempered_exponent(alpha, theta, float(laplace_exponent(p, s))))


def tempered_gcp_pgf(p: GcpParams, alpha: float, theta: float, u: float | np.ndarray, t: float) -> float | np.ndarray:
    _check_tempered(alpha, theta)
    check_unit_disc(u)
    w = rate_exponent(p, u)
    if np.iscomplexobj(w):
        shifted = lower_inc_gamma_complex(alpha, w + theta) - lower_inc_gamma(alpha, theta)
        return np.exp(-t * alpha * shifted)
    return np.exp(-t * _tempered_exponent(alpha, theta, w))


def tempered_gcp_pmf(p: GcpParams, alpha: float, theta: float, n: int, t: float) -> float:
    _check_tempered(alpha, theta)
    _check_nt(n, t)
    moments = exp_phi_jet(PhiKind.TEMPERED_INCGAMMA, {"alpha": alpha, "theta": theta}, t, p.total_rate, n)
    return _jet_pmf(p, n, moments)


def tempered_gcp_small_n(p: GcpParams, alpha: float, theta: float, t: float) -> tuple[float, float, float]:
    big = p.total_rate + theta
    l1 = p.rates[0]
    l2 = p.rates[1] if p.k > 1 else 0.0
    exponent = t * _tempered_exponent(alpha, theta, p.total_rate)
    base = math.exp(-exponent - big)
    p0 = math.exp(-exponent)
    p1 = l1 * alpha * t * big ** (alpha - 1.0) * base
    bracket = 2.0 * l2 * big + l1**2 * (big - alpha + 1.0) + l1**2 * t * alpha * math.exp(-big) * big**alpha
    p2 = 0.5 * alpha * t * big ** (alpha - 2.0) * base * bracket
    return p0, p1, p2


def _tempered_clock_moments(alpha: float, theta: float, t: float) -> tuple[float, float]:
    mean = alpha * t * theta ** (alpha - 1.0) * math.exp(-theta)
    var = mean + alpha * (1.0 - alpha) * t * theta ** (alpha - 2.0) * math.exp(-theta)
    return mean, var


def tempered_gcp_moments(p: GcpParams, alpha: float, theta: float, s: float, t: float) -> MomentRecord:
    _check_tempered(alpha, theta)
    if s < 0:
        raise DomainError(f"s must be non-negative, got {s}")
    if s > t:
        raise OrderError(f"covariance needs s <= t, got s={s}, t={t}")

    def variance(at: float) -> float:
        clock_mean, clock_var = _tempered_clock_moments(alpha, theta, at)
        return p.c1**2 * clock_var + p.c2 * clock_mean

    mean, _ = _tempered_clock_moments(alpha, theta, t)
    return MomentRecord(mean=p.c1 * mean, var=variance(t), cov=variance(s))


def tempered_corr_ratio(p: GcpParams, alpha: float, theta: float, s: float, t: float) -> float:
    """Corr(M(s), M(t)) * sqrt(t / s)."""
    if s <= 0:
        raise DomainError(f"s must be positive, got {s}")
    at_t = tempered_gcp_moments(p, alpha, theta, s, t)
    at_s = tempered_gcp_moments(p, alpha, theta, s, s)
    return at_t.cov / math.sqrt(at_s.var * at_t.var) * math.sqrt(t / s)


# tails


def incgamma_tail_samples(
    p: GcpParams, alpha: float, epsilon: float, t: float, reps: int, engine: MonteCarloEngine
) -> np.ndarray:
    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        return sample_gcp_at(p, sample_incgamma_at(alpha, epsilon, t, rng, size), rng)

    return engine.run_sync(block, reps, stream=f"incgamma-tail/{alpha}/{epsilon}/{t}")


def incgamma_tail_slope(
    p: GcpParams,
    alpha: float,
    epsilon: float,
    y_grid: Sequence[float],
    t: float,
    reps: int,
    engine: MonteCarloEngine,
) -> float:
    """MC slope of log P{M(t) > y} against log y; the asymptote is -alpha."""
    samples = incgamma_tail_samples(p, alpha, epsilon, t, reps, engine)
    slope, _ = survival_slope(samples, y_grid)
    return slope


def tempered_tail_samples(
    p: GcpParams, alpha: float, theta: float, t: float, reps: int, engine: MonteCarloEngine
) -> np.ndarray:
    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        return sample_gcp_at(p, sample_tempered_incgamma_at(alpha, theta, t, rng, size), rng)

    return engine.run_sync(block, reps, stream=f"tempered-tail/{alpha}/{theta}/{t}")


def tempered_tail_slope(
    p: GcpParams,
    alpha: float,
    theta: float,
    y_grid: Sequence[float],
    t: float,
    reps: int,
    engine: MonteCarloEngine,
) -> float:
    """Same estimator for the tempered clock; close to -alpha only while sqrt(theta * y) << 1."""
    samples = tempered_tail_samples(p, alpha, theta, t, reps, engine)
    slope, _ = survival_slope(samples, y_grid)
    return slope


def sample_gsfcp(p: GcpParams, beta: float, t: float, rng: np.random.Generator, size: Size = None) -> np.ndarray:
    return sample_gcp_at(p, np.atleast_1d(sample_stable(beta, t, rng, size)), rng)
