from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import gammaln, poch, rgamma

from src.config.settings import get_settings
from src.errors import ConvergenceError, DomainError
from src.utils.logger import setup_logger

logger = setup_logger("specfun.mittag_leffler")

_CHUNK = 128
_MAX_TERMS = 20_000
# log(1e-20): tail terms below this fraction of the peak are dropped
_LOG_TAIL = -46.0
# above this ratio of peak term to sum, double precision loses the 1e-12 target
_CANCELLATION_LIMIT = 100.0


def ml3(alpha: float, beta: float, gamma: float, x: float) -> float:
    """Three-parameter Mittag-Leffler function E^gamma_{alpha,beta}(x) for real x."""
    if alpha <= 0 or beta <= 0 or gamma <= 0:
        raise DomainError(f"ml3 needs positive parameters, got ({alpha}, {beta}, {gamma})")
    x_max = get_settings().ml_x_max
    if not math.isfinite(x) or abs(x) > x_max:
        raise ConvergenceError(f"ml3 argument {x} outside the validated range |x| <= {x_max}")
    return _ml3_cached(float(alpha), float(beta), float(gamma), float(x))


def ml3_derivative(alpha: float, beta: float, gamma: float, m: int, x: float) -> float:
    """m-th derivative in x: (gamma)_m E^{gamma+m}_{alpha, beta+alpha m}(x)."""
    if m < 0:
        raise DomainError("derivative order must be non-negative")
    if m == 0:
        return ml3(alpha, beta, gamma, x)
    return float(poch(gamma, m)) * ml3(alpha, beta + alpha * m, gamma + m, x)


def ml_taylor_coefficients(alpha: float, beta: float, x0: float, order: int) -> np.ndarray:
    """Taylor coefficients of E_{alpha,beta} at x0: E^{r+1}_{alpha, beta+alpha r}(x0), r = 0..order."""
    return np.array([ml3(alpha, beta + alpha * r, r + 1.0, x0) for r in range(order + 1)])


@lru_cache(maxsize=8192)
def _ml3_cached(alpha: float, beta: float, gamma: float, x: float) -> float:
    if x == 0:
        return float(rgamma(beta))

    log_abs_x = math.log(abs(x))
    sign = -1.0 if x < 0 else 1.0
    log_terms: list[np.ndarray] = []
    peak = -math.inf
    start = 0
    while True:
        j = np.arange(start, start + _CHUNK, dtype=float)
        chunk = gammaln(j + gamma) - gammaln(gamma) - gammaln(j + 1.0) - gammaln(j * alpha + beta) + j * log_abs_x
        log_terms.append(chunk)
        peak = max(peak, float(chunk.max()))
        if chunk[-1] < chunk[-2] and chunk[-1] < peak + _LOG_TAIL:
            break
        start += _CHUNK
        if start > _MAX_TERMS:
            raise ConvergenceError(f"ml3 series did not settle within {_MAX_TERMS} terms at x={x}")

    if peak > 700.0:
        return _ml3_mpmath(alpha, beta, gamma, x, peak)

    log_mag = np.concatenate(log_terms)
    signs = sign ** np.arange(log_mag.size)
    total = math.fsum(signs * np.exp(log_mag))
    if total == 0 or math.exp(peak) / abs(total) > _CANCELLATION_LIMIT:
        return _ml3_mpmath(alpha, beta, gamma, x, peak)
    return total


def _ml3_mpmath(alpha: float, beta: float, gamma: float, x: float, log_peak: float) -> float:
    dps = 30 + int(max(log_peak, 0.0) / math.log(10.0))
    logger.debug("ml3 falling back to mpmath at %d digits for x=%s", dps, x)
    with mpmath.workdps(dps):
        a, b, g, z = (mpmath.mpf(v) for v in (alpha, beta, gamma, x))
        coefficient = mpmath.mpf(1)
        total = mpmath.mpf(0)
        largest = mpmath.mpf(0)
        previous = mpmath.inf
        threshold = mpmath.mpf(10) ** (-dps)
        j = 0
        while True:
            term = coefficient * mpmath.rgamma(j * a + b)
            total += term
            largest = max(largest, abs(term))
            if abs(term) < previous and abs(term) < threshold * largest:
                break
            previous = abs(term)
            coefficient *= (g + j) * z / (j + 1)
            j += 1
            if j > _MAX_TERMS:
                raise ConvergenceError(f"ml3 high-precision series did not settle at x={x}")
        return float(total)
