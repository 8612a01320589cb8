from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from src.config.settings import get_settings
from src.errors import ConvergenceError, DomainError, HorizonExceededError
from src.models.outputs import DriftedLaw, McEstimate
from src.models.params import GcpParams
from src.montecarlo.engine import MonteCarloEngine
from src.processes.clocks import Size, sample_inverse_stable, unit_stable
from src.processes.gcp_core import gcp_pmf, gcp_truncation, laplace_exponent, sample_gcp_at
from src.specfun.mittag_leffler import ml3

_SERIES_BOUND = 1e-10


def _check_drift(b: float, t: float) -> None:
    if b < 0:
        raise DomainError(f"drift must be non-negative, got {b}")
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")


def drifted_law(p: GcpParams, b: float, t: float, n_max: int | None = None) -> DriftedLaw:
    """Atoms (n + b t, p(n, t)) of M(t) + b t."""
    _check_drift(b, t)
    n_max = n_max if n_max is not None else gcp_truncation(p, t)
    atoms = [(n + b * t, gcp_pmf(p, n, t)) for n in range(n_max + 1)]
    return DriftedLaw(drift=b, t=t, atoms=atoms)


def atom_laplace(law: DriftedLaw, s: float) -> float:
    return math.fsum(math.exp(-s * location) * mass for location, mass in law.atoms)


def drifted_laplace(p: GcpParams, b: float, s: float, t: float) -> float:
    _check_drift(b, t)
    if s < 0:
        raise DomainError("Laplace argument must be non-negative")
    return math.exp(-s * b * t - t * float(laplace_exponent(p, s)))


def drifted_laplace_ode_residual(p: GcpParams, b: float, s: float, t: float, h: float) -> float:
    """d/dt of the Laplace transform minus (-b s - Lambda + sum_j lambda_j e^{-s j}) times it."""
    if not t > h > 0:
        raise DomainError(f"need t > h > 0, got t={t}, h={h}")
    derivative = (drifted_laplace(p, b, s, t + h) - drifted_laplace(p, b, s, t - h)) / (2.0 * h)
    generator = -b * s - float(laplace_exponent(p, s))
    return derivative - generator * drifted_laplace(p, b, s, t)


def _check_indices(*pairs: tuple[float, str]) -> None:
    for value, name in pairs:
        if not 0 < value <= 1:
            raise DomainError(f"{name} must lie in (0, 1], got {value}")


def gstfcp_drift_laplace(
    p: GcpParams, b: float, alpha: float, gamma: float, beta: float, eta: float, t: float
) -> float:
    """E exp(-eta (M(D_gamma(Y_beta(t))) + b D_alpha(Y_beta(t))))."""
    _check_indices((alpha, "alpha"), (gamma, "gamma"), (beta, "beta"))
    if b < 0 or eta < 0:
        raise DomainError("need b >= 0 and eta >= 0")
    drift_part = (b * eta) ** alpha if b > 0 else 0.0
    exponent = drift_part + float(laplace_exponent(p, eta)) ** gamma
    return ml3(beta, 1.0, 1.0, -exponent * t**beta)


def sample_gstfcp_drift(
    p: GcpParams,
    b: float,
    alpha: float,
    gamma: float,
    beta: float,
    t: float,
    rng: np.random.Generator,
    size: Size = None,
) -> float | np.ndarray:
    """One shared Y = Y_beta(t); given Y the two stable clocks are independent."""
    _check_indices((alpha, "alpha"), (gamma, "gamma"), (beta, "beta"))
    y = np.atleast_1d(sample_inverse_stable(beta, t, rng, size))
    counting_clock = y ** (1.0 / gamma) * unit_stable(gamma, rng, y.shape)
    values = sample_gcp_at(p, counting_clock, rng).astype(float)
    if b > 0:
        values += b * y ** (1.0 / alpha) * unit_stable(alpha, rng, y.shape)
    return float(values[0]) if size is None else values


def sample_hitting_time(
    p: GcpParams,
    b: float,
    alpha: float,
    gamma: float,
    level: float,
    grid_step: float,
    rng: np.random.Generator,
    size: Size = None,
    max_steps: int | None = None,
) -> float | np.ndarray:
    """First grid time at which s -> M(D_gamma(s)) + b D_alpha(s) exceeds level.

    Each grid cell adds independent stable increments to both clocks and a
    fresh GCP increment over the D_gamma increment.
    """
    _check_indices((alpha, "alpha"), (gamma, "gamma"))
    if level < 0 or grid_step <= 0 or b < 0:
        raise DomainError("need level >= 0, grid_step > 0 and b >= 0")
    cap = max_steps or get_settings().hitting_max_steps
    paths = 1 if size is None else int(np.prod(size))
    value = np.zeros(paths)
    hit = np.full(paths, np.nan)
    active = np.arange(paths)
    scale_gamma = grid_step ** (1.0 / gamma)
    scale_alpha = grid_step ** (1.0 / alpha)
    step = 0
    while active.size:
        step += 1
        if step > cap:
            raise HorizonExceededError(f"{active.size} paths did not cross level {level} within {cap} steps")
        counting = scale_gamma * unit_stable(gamma, rng, active.size)
        increment = sample_gcp_at(p, counting, rng).astype(float)
        if b > 0:
            increment += b * scale_alpha * unit_stable(alpha, rng, active.size)
        value[active] += increment
        crossed = value[active] > level
        hit[active[crossed]] = step * grid_step
        active = active[~crossed]
    return float(hit[0]) if size is None else hit.reshape(size)


def _marginal(p: GcpParams, b: float, alpha: float, gamma: float, x: float, rng, size: int) -> np.ndarray:
    values = sample_gcp_at(p, x ** (1.0 / gamma) * unit_stable(gamma, rng, size), rng).astype(float)
    if b > 0:
        values += b * x ** (1.0 / alpha) * unit_stable(alpha, rng, size)
    return values


@dataclass(frozen=True)
class DualityEstimate:
    grid_step: float
    survival: McEstimate
    marginal: McEstimate
    gap: McEstimate


def hitting_duality(
    p: GcpParams,
    b: float,
    alpha: float,
    gamma: float,
    x: float,
    t: float,
    reps: int,
    grid_step: float,
    engine: MonteCarloEngine,
) -> DualityEstimate:
    """P{H(t) > x} from paths against P{M(x) < t} from independent marginal draws."""
    cells = x / grid_step
    if abs(cells - round(cells)) > 1e-9 * max(cells, 1.0):
        raise DomainError(f"x={x} must be a multiple of the grid step {grid_step}")

    def hitting_block(rng: np.random.Generator, size: int) -> np.ndarray:
        return sample_hitting_time(p, b, alpha, gamma, t, grid_step, rng, size)

    def marginal_block(rng: np.random.Generator, size: int) -> np.ndarray:
        return _marginal(p, b, alpha, gamma, x, rng, size)

    key = f"{b}/{alpha}/{gamma}/{x}/{t}"
    survived = engine.run_sync(hitting_block, reps, stream=f"hitting/{key}/{grid_step}") > x + 1e-12
    below = engine.run_sync(marginal_block, reps, stream=f"hitting-marginal/{key}") < t
    p_path, p_marginal = float(survived.mean()), float(below.mean())
    se_path = math.sqrt(p_path * (1.0 - p_path) / reps)
    se_marginal = math.sqrt(p_marginal * (1.0 - p_marginal) / reps)
    return DualityEstimate(
        grid_step=grid_step,
        survival=McEstimate(value=p_path, stderr=se_path, reps=reps),
        marginal=McEstimate(value=p_marginal, stderr=se_marginal, reps=reps),
        gap=McEstimate(value=abs(p_path - p_marginal), stderr=math.hypot(se_path, se_marginal), reps=reps),
    )


def hitting_duality_gap(
    p: GcpParams,
    b: float,
    alpha: float,
    gamma: float,
    x: float,
    t: float,
    reps: int,
    engine: MonteCarloEngine,
    grid_step: float | None = None,
) -> float:
    step = grid_step or get_settings().grid_step
    return hitting_duality(p, b, alpha, gamma, x, t, reps, step, engine).gap.value


def hitting_refinement_study(
    p: GcpParams,
    b: float,
    alpha: float,
    gamma: float,
    x: float,
    t: float,
    reps: int,
    grid_step: float,
    engine: MonteCarloEngine,
    levels: int = 3,
) -> list[DualityEstimate]:
    """Duality estimates at grid_step, grid_step/2, ... (levels entries)."""
    return [hitting_duality(p, b, alpha, gamma, x, t, reps, grid_step / 2**level, engine) for level in range(levels)]


def _sum_cdfs(p: GcpParams, horizon: int, n_max: int) -> np.ndarray:
    """P{S_n <= m} for n = 1..n_max and m = 0..horizon, S_n a sum of n jump sizes."""
    law = np.zeros(horizon + 1)
    jump_law = p.jump_law()
    law[1 : min(p.k, horizon) + 1] = jump_law[: min(p.k, horizon)]
    cdfs = np.zeros((n_max, horizon + 1))
    current = np.zeros(horizon + 1)
    current[0] = 1.0
    for n in range(1, n_max + 1):
        current = np.convolve(current, law)[: horizon + 1]
        cdfs[n - 1] = np.cumsum(current)
    return cdfs


def _boundary_coefficients(gamma: float, n_max: int) -> np.ndarray:
    n = np.arange(1, n_max + 1, dtype=float)
    return np.exp(gammaln(n - gamma) - gammaln(n + 1.0))


def _boundary_values(p: GcpParams, gamma: float, horizon: int, truncation: int) -> np.ndarray:
    """w(0, m) for integer m = 0..horizon; the series is constant on [m, m + 1)."""
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    if not 0 <= truncation <= 400:
        raise DomainError(f"truncation must lie in [0, 400], got {truncation}")
    lam = p.total_rate
    scale = gamma / math.gamma(1.0 - gamma)
    if truncation < horizon:
        omitted = lam**gamma * scale * math.exp(gammaln(truncation + 1.0 - gamma) - gammaln(truncation + 2.0))
        if omitted > _SERIES_BOUND:
            raise ConvergenceError(f"boundary series truncated at N={truncation} leaves terms of size {omitted:.2e}")
    n_max = min(truncation, horizon)
    if n_max == 0:
        return np.full(horizon + 1, lam**gamma)
    cdfs = _sum_cdfs(p, horizon, n_max)
    return lam**gamma * (1.0 - scale * (_boundary_coefficients(gamma, n_max) @ cdfs))


def hitting_boundary_series(p: GcpParams, gamma: float, t: float, truncation: int) -> float:
    """Boundary value w(0, t) of the hitting-time density, with the Heaviside step equal to 1 at 0."""
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    return float(_boundary_values(p, gamma, int(math.floor(t)), truncation)[-1])


def hitting_boundary_laplace_gap(
    p: GcpParams, gamma: float, eta: float, t_max: float, truncation: int = 300
) -> float:
    """|integral_0^t_max e^{-eta t} w(0, t) dt - eta^{-1} (sum_j lambda_j (1 - e^{-eta j}))^gamma|."""
    if eta <= 0 or t_max <= 0:
        raise DomainError("need eta > 0 and t_max > 0")
    horizon = int(math.floor(t_max))
    values = _boundary_values(p, gamma, horizon, truncation)
    edges = np.minimum(np.arange(horizon + 2, dtype=float), t_max)
    weights = (np.exp(-eta * edges[:-1]) - np.exp(-eta * edges[1:])) / eta
    integral = float(values @ weights)
    closed = float(laplace_exponent(p, eta)) ** gamma / eta
    return abs(integral - closed)
