from __future__ import annotations

import math

import numpy as np
from scipy import integrate
from scipy.special import beta as beta_fn, betaln, gamma as gamma_fn

from src.config.settings import get_settings
from src.errors import ConditioningError, DomainError, QuadratureError
from src.models.outputs import MomentRecord
from src.models.params import GcpParams
from src.models.paths import StepPath
from src.processes.clocks import Size, sample_inverse_stable_path
from src.processes.gcp_core import gcp_pmf, omega_weights, simulate_gcp
from src.specfun.functions import inc_beta


def _check_order(a: float) -> None:
    if a <= 0:
        raise DomainError(f"integration order must be positive, got {a}")


def rl_integral_step(path: StepPath, a: float, t: float) -> float:
    """Riemann-Liouville integral of order a of a step path, exact on each constancy interval."""
    _check_order(a)
    if not 0 <= t <= path.horizon:
        raise DomainError(f"t={t} outside [0, {path.horizon}]")
    inside = path.epochs[path.epochs <= t]
    bounds = np.concatenate(([0.0], inside, [t]))
    levels = path.values()[: bounds.size - 1]
    remaining = (t - bounds) ** a
    return float(np.dot(levels, remaining[:-1] - remaining[1:]) / gamma_fn(a + 1.0))


def rl_integral_jumps(epochs: np.ndarray, sizes: np.ndarray, a: float, t: float) -> float:
    """Same integral written over jumps: sum of size (t - tau)^a / Gamma(a + 1) for tau <= t."""
    _check_order(a)
    epochs = np.asarray(epochs, dtype=float)
    mask = epochs <= t
    return float(np.dot(np.asarray(sizes)[mask], (t - epochs[mask]) ** a) / gamma_fn(a + 1.0))


def sample_gcp_rl_integrals(p: GcpParams, a: float, t: float, rng: np.random.Generator, size: Size = None) -> np.ndarray:
    """Rows (integral of order a over [0, t], M(t)) for independent GCP paths."""
    _check_order(a)
    paths = 1 if size is None else int(np.prod(size))
    integrals = np.zeros(paths)
    counts = np.zeros(paths)
    for j, rate in enumerate(p.rates, start=1):
        if rate == 0:
            continue
        per_path = rng.poisson(rate * t, paths)
        owners = np.repeat(np.arange(paths), per_path)
        epochs = rng.uniform(0.0, t, owners.size)
        integrals += j * np.bincount(owners, weights=(t - epochs) ** a, minlength=paths)
        counts += j * per_path
    return np.column_stack((integrals / gamma_fn(a + 1.0), counts))


def fracint_gcp_moments(p: GcpParams, a: float, t: float) -> MomentRecord:
    _check_order(a)
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    mean = p.c1 * t ** (a + 1.0) / gamma_fn(a + 2.0)
    var = p.c2 * t ** (2.0 * a + 1.0) / ((2.0 * a + 1.0) * gamma_fn(a + 1.0) ** 2)
    return MomentRecord(mean=mean, var=var)


def gfcp_step_path(
    p: GcpParams, beta: float, horizon: float, grid_step: float, rng: np.random.Generator
) -> StepPath:
    """GCP run on the gridded inverse stable clock, returned in real time.

    An operational jump at tau lands at the first real time the clock
    reaches tau; simultaneous arrivals are merged into one jump.
    """
    clock = sample_inverse_stable_path(beta, horizon, grid_step, rng)
    reached = float(clock.values[-1])
    if reached <= 0:
        return StepPath.empty(horizon)
    operational = simulate_gcp(p, reached, rng)
    index = np.searchsorted(clock.values, operational.epochs, side="left")
    valid = index < clock.values.size
    real_epochs = clock.grid[index[valid]]
    sizes = operational.sizes[valid]
    if real_epochs.size == 0:
        return StepPath.empty(horizon)
    unique, first = np.unique(real_epochs, return_index=True)
    merged = np.add.reduceat(sizes, first)
    return StepPath(unique, merged, horizon)


def fracint_gfcp_mean(p: GcpParams, a: float, beta: float, t: float) -> float:
    _check_order(a)
    return p.c1 * t ** (a + beta) / gamma_fn(a + beta + 1.0)


def _cross_integral(a: float, beta: float, t: float, tol: float) -> float:
    """Double integral over 0 < s < w < t of (t-s)^{a-1} (t-w)^{a-1} w^{2 beta} B(beta, beta+1; s/w).

    With u = (t - w)^a and r = (t - s)^a both endpoint singularities go away.
    """
    top = t**a

    def integrand(r: float, u: float) -> float:
        w = t - u ** (1.0 / a)
        if w <= 0:
            return 0.0
        s = max(t - r ** (1.0 / a), 0.0)
        ratio = min(s / w, 1.0)
        return w ** (2.0 * beta) * inc_beta(beta, beta + 1.0, ratio) / (a * a)

    value, error = integrate.dblquad(integrand, 0.0, top, lambda u: u, lambda u: top, epsabs=tol, epsrel=1e-8)
    if error > 10.0 * tol:
        raise QuadratureError(f"cross integral error estimate {error:.2e} exceeds tolerance {tol:.1e}")
    return value


def fracint_gfcp_second_moment(p: GcpParams, a: float, beta: float, t: float, quad_tol: float | None = None) -> float:
    _check_order(a)
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    tol = quad_tol if quad_tol is not None else get_settings().quad_tol
    ga, gb = gamma_fn(a), gamma_fn(beta + 1.0)
    single = 2.0 * p.c2 * beta_fn(beta + 1.0, 2.0 * a) * t ** (2.0 * a + beta) / (ga**2 * gb * a)
    diagonal = 2.0 * p.c1**2 * beta_fn(2.0 * beta + 1.0, 2.0 * a) * t ** (2.0 * a + 2.0 * beta)
    diagonal /= ga**2 * gamma_fn(2.0 * beta + 1.0) * a
    cross = 2.0 * p.c1**2 * beta / (ga * gb) ** 2 * _cross_integral(a, beta, t, tol)
    return single + diagonal + cross


def fracint_gfcp_variance(p: GcpParams, a: float, beta: float, t: float, quad_tol: float | None = None) -> float:
    return fracint_gfcp_second_moment(p, a, beta, t, quad_tol) - fracint_gfcp_mean(p, a, beta, t) ** 2


def fracint_conditional_mean(p: GcpParams, a: float, n: int, t: float) -> float:
    """E[integral of order a of M over [0, t] | M(t) = n]."""
    _check_order(a)
    if t <= 0 or n < 0:
        raise DomainError("need t > 0 and n >= 0")
    mass = gcp_pmf(p, n, t)
    if mass == 0:
        raise ConditioningError(f"P{{M({t}) = {n}}} is zero")
    log_t = math.log(t)
    total = 0.0
    for r in range(1, n + 1):
        for y, log_first in omega_weights(p, r).items():
            for z, log_second in omega_weights(p, n - r).items():
                log_term = log_first + log_second + (y + a + z) * log_t + betaln(y + 1.0, a + z)
                total += r * math.exp(log_term - p.total_rate * t)
    return total / (mass * gamma_fn(a))
