from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import betainc, gamma as gamma_fn, gammainc, gammaln

from src.errors import ConvergenceError, DomainError, PoleError
from src.utils.logger import setup_logger

logger = setup_logger("specfun.functions")

_KUMMER_MAX_TERMS = 5_000
_KUMMER_CANCELLATION_LIMIT = 1e3


def kummer1f1(a: float, b: float, x: float) -> float:
    """Confluent hypergeometric 1F1(a; b; x) by its power series."""
    if b <= 0 and float(b).is_integer():
        raise PoleError(f"1F1 has a pole at b={b}")
    if x == 0:
        return 1.0

    terms = [1.0]
    term = 1.0
    largest = 1.0
    for j in range(_KUMMER_MAX_TERMS):
        term *= (a + j) * x / ((b + j) * (j + 1))
        terms.append(term)
        largest = max(largest, abs(term))
        if term == 0.0:
            break
        if j + 1 > abs(x) and abs(term) < 1e-17 * largest:
            break
    else:
        raise ConvergenceError(f"1F1 series did not settle for ({a}, {b}, {x})")

    total = math.fsum(terms)
    if total == 0 or largest / abs(total) > _KUMMER_CANCELLATION_LIMIT:
        logger.debug("1F1 falling back to mpmath for (%s, %s, %s)", a, b, x)
        dps = 30 + int(math.log10(max(largest, 1.0)))
        with mpmath.workdps(dps):
            return float(mpmath.hyp1f1(a, b, x))
    return total


def _check_halfint(m: int, z: float) -> None:
    if z <= 0:
        raise DomainError(f"Bessel K needs z > 0, got {z}")
    if m < 0:
        raise DomainError(f"shifted order must be non-negative, got {m}")


def log_bessel_k_halfint(m: int, z: float) -> float:
    """log K_{m-1/2}(z) from the closed-form half-integer polynomial."""
    _check_halfint(m, z)
    order = max(m - 1, 0)  # K_{-1/2} = K_{1/2}
    j = np.arange(order + 1, dtype=float)
    log_coeffs = gammaln(order + j + 1) - gammaln(j + 1) - gammaln(order - j + 1) - j * math.log(2.0 * z)
    peak = float(log_coeffs.max())
    log_poly = peak + math.log(math.fsum(np.exp(log_coeffs - peak)))
    return 0.5 * math.log(math.pi / (2.0 * z)) - z + log_poly


def bessel_k_halfint(m: int, z: float) -> float:
    """K_{m-1/2}(z) for integer m >= 0."""
    return math.exp(log_bessel_k_halfint(m, z))


def lower_inc_gamma(a: float, x: float | np.ndarray) -> float | np.ndarray:
    """gamma(a; x) = integral_0^x e^{-w} w^{a-1} dw."""
    if a <= 0:
        raise DomainError(f"lower incomplete gamma needs a > 0, got {a}")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise DomainError("lower incomplete gamma needs x >= 0")
    result = gammainc(a, x_arr) * gamma_fn(a)
    return float(result) if np.ndim(result) == 0 else result


def lower_inc_gamma_complex(a: float, z: complex | np.ndarray) -> complex | np.ndarray:
    """gamma(a; z) for complex z, vectorized through mpmath."""
    if a <= 0:
        raise DomainError(f"lower incomplete gamma needs a > 0, got {a}")
    evaluate = np.vectorize(lambda w: complex(mpmath.gammainc(a, 0, complex(w))), otypes=[complex])
    result = evaluate(np.asarray(z, dtype=complex))
    return complex(result) if np.ndim(result) == 0 else result


def inc_beta(a: float, b: float, x: float | np.ndarray) -> float | np.ndarray:
    """B(a, b; x) = integral_0^x w^{a-1} (1-w)^{b-1} dw."""
    if a <= 0 or b <= 0:
        raise DomainError(f"incomplete beta needs a, b > 0, got ({a}, {b})")
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr < 0) | (x_arr > 1)):
        raise DomainError("incomplete beta needs x in [0, 1]")
    result = betainc(a, b, x_arr) * beta_fn(a, b)
    return float(result) if np.ndim(result) == 0 else result
