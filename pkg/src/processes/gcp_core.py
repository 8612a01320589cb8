from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np
from scipy.special import gammaln, logsumexp
from scipy.stats import poisson

from src.config.settings import get_settings
from src.errors import CapExceededError, DomainError, OrderError
from src.models.outputs import MomentRecord
from src.models.params import Composition, GcpParams
from src.models.paths import StepPath

# counts beyond this are saturated; every threshold used downstream is far smaller
_POISSON_MEAN_CAP = 1e17


def enumerate_omega(k: int, n: int, cap: int | None = None) -> tuple[Composition, ...]:
    """All x with x_1 + 2 x_2 + ... + k x_k = n.

    Order is lexicographic on (x_k, ..., x_1), so x_1 varies fastest.
    """
    if k < 1 or n < 0:
        raise DomainError(f"need k >= 1 and n >= 0, got k={k}, n={n}")
    return _enumerate(k, n, cap if cap is not None else get_settings().omega_cap)


@lru_cache(maxsize=4096)
def _enumerate(k: int, n: int, cap: int) -> tuple[Composition, ...]:
    found: list[Composition] = []
    for x in _solutions(k, n, ()):
        found.append(Composition(x))
        if len(found) > cap:
            raise CapExceededError(f"Omega({k}, {n}) has more than {cap} solutions", count=len(found))
    return tuple(found)


def _solutions(j: int, remaining: int, higher: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if j == 1:
        yield (remaining, *higher)
        return
    for xj in range(remaining // j + 1):
        yield from _solutions(j - 1, remaining - j * xj, (xj, *higher))


def omega_weights(p: GcpParams, n: int) -> dict[int, float]:
    """log of sum over Omega(k, n) with weight z of prod lambda_j^x_j / x_j!, keyed by z."""
    return dict(_omega_weights(p.rates, n))


@lru_cache(maxsize=8192)
def _omega_weights(rates: tuple[float, ...], n: int) -> tuple[tuple[int, float], ...]:
    k = len(rates)
    positive = [j for j, rate in enumerate(rates) if rate > 0]
    log_rates = np.array([math.log(rate) if rate > 0 else 0.0 for rate in rates])
    by_weight: dict[int, list[float]] = {}
    for composition in enumerate_omega(k, n):
        x = np.array(composition.x)
        if any(x[j] > 0 for j in range(k) if j not in positive):
            continue
        log_term = float(np.dot(x, log_rates) - gammaln(x + 1.0).sum())
        by_weight.setdefault(composition.weight, []).append(log_term)
    return tuple((z, float(logsumexp(terms))) for z, terms in sorted(by_weight.items()))


def compose_pmf(p: GcpParams, n: int, moment: Callable[[int], float]) -> float:
    """sum_z A(n, z) m(z), where m(z) = E[T^z exp(-Lambda T)] for the clock T."""
    return math.fsum(math.exp(log_a) * moment(z) for z, log_a in omega_weights(p, n).items())


def compose_log_pmf(p: GcpParams, n: int, log_moment: Callable[[int], float]) -> float:
    """Same mixture as compose_pmf with log m(z) supplied; returns the log probability."""
    weights = omega_weights(p, n)
    if not weights:
        return -math.inf
    return float(logsumexp([log_a + log_moment(z) for z, log_a in weights.items()]))


def gcp_pmf(p: GcpParams, n: int, t: float) -> float:
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    if t == 0:
        return 1.0 if n == 0 else 0.0
    lam = p.total_rate
    log_t = math.log(t)
    return math.exp(compose_log_pmf(p, n, lambda z: z * log_t - lam * t))


def gcp_pmf_table(p: GcpParams, n_max: int, t: float) -> np.ndarray:
    """p(0..n_max, t) by the recursion n p(n) = t sum_j j lambda_j p(n - j)."""
    if t < 0 or n_max < 0:
        raise DomainError("need t >= 0 and n_max >= 0")
    table = np.zeros(n_max + 1)
    table[0] = math.exp(-p.total_rate * t)
    weighted = [j * rate for j, rate in enumerate(p.rates, start=1)]
    for n in range(1, n_max + 1):
        inflow = math.fsum(weighted[j - 1] * table[n - j] for j in range(1, min(n, p.k) + 1))
        table[n] = t / n * inflow
    return table


def gcp_truncation(p: GcpParams, t: float, tol: float | None = None) -> int:
    """N with P{M(t) > N} <= tol, from M(t) <= k * (number of jumps)."""
    tol = tol if tol is not None else get_settings().pmf_tail_tol
    if t <= 0:
        return 0
    return int(p.k * poisson.isf(tol, p.total_rate * t))


def rate_exponent(p: GcpParams, u: complex | np.ndarray) -> complex | np.ndarray:
    """sum_j lambda_j (1 - u^j); accepts real or complex arrays."""
    u = np.asarray(u)
    return sum(rate * (1.0 - u**j) for j, rate in enumerate(p.rates, start=1) if rate > 0)


def laplace_exponent(p: GcpParams, s: float | np.ndarray) -> float | np.ndarray:
    """sum_j lambda_j (1 - e^{-s j}), the GCP Laplace exponent."""
    return rate_exponent(p, np.exp(-np.asarray(s, dtype=float)))


def check_unit_disc(u: float | np.ndarray) -> None:
    if np.any(np.abs(np.asarray(u)) > 1):
        raise DomainError("pgf argument must satisfy |u| <= 1")


def gcp_pgf(p: GcpParams, u: float | np.ndarray, t: float) -> float | np.ndarray:
    check_unit_disc(u)
    return np.exp(-t * rate_exponent(p, u))


def gcp_mgf(p: GcpParams, u: float | np.ndarray, t: float) -> float | np.ndarray:
    if np.any(np.asarray(u) > 0):
        raise DomainError("the mgf is exposed for non-positive arguments only")
    return np.exp(-t * laplace_exponent(p, -np.asarray(u, dtype=float)))


def gcp_moments(p: GcpParams, s: float, t: float) -> MomentRecord:
    if s < 0:
        raise DomainError(f"s must be non-negative, got {s}")
    if s > t:
        raise OrderError(f"covariance needs s <= t, got s={s}, t={t}")
    return MomentRecord(mean=p.c1 * t, var=p.c2 * t, cov=p.c2 * s)


def simulate_gcp(p: GcpParams, horizon: float, rng: np.random.Generator) -> StepPath:
    """Superpose k Poisson streams, stream j carrying jumps of size j."""
    if horizon <= 0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    epochs: list[np.ndarray] = []
    sizes: list[np.ndarray] = []
    for j, rate in enumerate(p.rates, start=1):
        if rate == 0:
            continue
        count = rng.poisson(rate * horizon)
        epochs.append(rng.uniform(0.0, horizon, size=count))
        sizes.append(np.full(count, j, dtype=np.int64))
    if not epochs:
        return StepPath.empty(horizon)
    all_epochs = np.concatenate(epochs)
    order = np.argsort(all_epochs, kind="stable")
    return StepPath(all_epochs[order], np.concatenate(sizes)[order], horizon)


def sample_gcp_at(p: GcpParams, times: float | np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """M(T) for each T in times, drawn as sum_j j * Poisson(lambda_j T)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0) or np.any(np.isnan(times)):
        raise DomainError("evaluation times must be non-negative numbers")
    counts = np.zeros(times.shape, dtype=np.int64)
    for j, rate in enumerate(p.rates, start=1):
        if rate == 0:
            continue
        means = np.minimum(rate * times, _POISSON_MEAN_CAP)
        counts += j * rng.poisson(means)
    return counts


def gcp_ode_residual(p: GcpParams, n: int, t: float, h: float) -> float:
    """Central difference of d/dt p(n, t) minus the forward-equation right-hand side."""
    if not t > h > 0:
        raise DomainError(f"need t > h > 0, got t={t}, h={h}")
    derivative = (gcp_pmf(p, n, t + h) - gcp_pmf(p, n, t - h)) / (2.0 * h)
    inflow = math.fsum(p.rates[j - 1] * gcp_pmf(p, n - j, t) for j in range(1, min(n, p.k) + 1))
    return derivative - (-p.total_rate * gcp_pmf(p, n, t) + inflow)
