from __future__ import annotations

import math

import numpy as np
from scipy import stats
from scipy.special import erfcx, gamma as gamma_fn

from src.config.settings import get_settings
from src.errors import DomainError, HorizonExceededError, RejectionCapError
from src.models.params import ClockKind, ClockSpec
from src.models.paths import ClockPath
from src.specfun.functions import lower_inc_gamma
from src.specfun.mittag_leffler import ml3

# a first passage that never happens under negative drift
ABSORBED_NEVER = math.inf

Size = int | tuple[int, ...] | None


def _out(values: np.ndarray, size: Size) -> float | np.ndarray:
    return float(values) if size is None else values


def _check_index(value: float, name: str) -> None:
    if not 0 < value <= 1:
        raise DomainError(f"{name} must lie in (0, 1], got {value}")


def _check_time(t: float, *, strict: bool = False) -> None:
    if t < 0 or (strict and t == 0) or not math.isfinite(t):
        raise DomainError(f"time must be {'positive' if strict else 'non-negative'}, got {t}")


def unit_stable(alpha: float, rng: np.random.Generator, size: Size = None) -> np.ndarray:
    """One-sided stable S with E exp(-s S) = exp(-s^alpha), by Kanter's representation."""
    _check_index(alpha, "alpha")
    if alpha == 1:
        return np.ones(size if size is not None else ())
    u = rng.uniform(0.0, math.pi, size)
    e = rng.standard_exponential(size)
    a = np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
    b = (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha)
    return a * b


def sample_stable(alpha: float, t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    _check_time(t)
    return _out(t ** (1.0 / alpha) * unit_stable(alpha, rng, size), size)


def sample_inverse_stable(beta: float, t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """Y(t) via the marginal identity Y(t) = (t / S)^beta."""
    _check_index(beta, "beta")
    _check_time(t)
    if beta == 1 or t == 0:
        return _out(np.full(size if size is not None else (), float(t)), size)
    return _out((t / unit_stable(beta, rng, size)) ** beta, size)


def sample_inverse_stable_path(
    beta: float,
    horizon: float,
    grid_step: float,
    rng: np.random.Generator,
    max_steps: int | None = None,
) -> ClockPath:
    """Right-continuous inverse of a stable path sampled on the operational grid k * grid_step.

    The returned path jumps to k * grid_step at the real time D_k where the
    stable path first reaches its k-th grid value.
    """
    _check_index(beta, "beta")
    _check_time(horizon, strict=True)
    if grid_step <= 0:
        raise DomainError(f"grid step must be positive, got {grid_step}")
    cap = max_steps or get_settings().hitting_max_steps
    scale = grid_step ** (1.0 / beta)
    levels: list[np.ndarray] = []
    reached = 0.0
    steps = 0
    chunk = 256
    while reached <= horizon:
        increments = scale * unit_stable(beta, rng, chunk)
        levels.append(reached + np.cumsum(increments))
        reached = float(levels[-1][-1])
        steps += chunk
        if steps > cap:
            raise HorizonExceededError(f"inverse stable path needed more than {cap} grid steps")
    epochs = np.concatenate(levels)
    count = int(np.searchsorted(epochs, horizon, side="right"))
    epochs = epochs[:count]
    values = grid_step * np.arange(1, count + 1)
    # collapse epochs that coincide in floating point, keeping the latest value
    keep = np.append(np.diff(epochs) > 0, True) if count else np.zeros(0, dtype=bool)
    epochs, values = epochs[keep], values[keep]
    if epochs.size and epochs[0] == 0:
        epochs, values = epochs[1:], values[1:]
    return ClockPath(np.concatenate(([0.0], epochs)), np.concatenate(([0.0], values)))


def sample_first_passage(t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """Z(t) = t^2 / N^2, the first passage of Brownian motion above level t."""
    _check_time(t, strict=True)
    return _out(t**2 / rng.standard_normal(size) ** 2, size)


def first_passage_density(s: float | np.ndarray, t: float) -> float | np.ndarray:
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        density = np.where(s > 0, t * np.exp(-(t**2) / (2.0 * s)) / np.sqrt(2.0 * math.pi * s**3), 0.0)
    return float(density) if density.ndim == 0 else density


def sample_first_passage_drift(mu: float, t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """First passage of level t by B(s) + mu s; ABSORBED_NEVER on the defect when mu < 0."""
    _check_time(t, strict=True)
    if mu == 0:
        return sample_first_passage(t, rng, size)
    hits = rng.wald(t / abs(mu), t**2, size)
    if mu > 0:
        return _out(hits, size)
    escaped = rng.uniform(size=size) >= math.exp(2.0 * mu * t)
    return _out(np.where(escaped, ABSORBED_NEVER, hits), size)


def first_passage_drift_density(mu: float, s: float | np.ndarray, t: float) -> float | np.ndarray:
    """t exp(-(t - mu s)^2 / 2s) / sqrt(2 pi s^3); integrates to min(1, e^{2 mu t})."""
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        density = np.where(s > 0, t * np.exp(-((t - mu * s) ** 2) / (2.0 * s)) / np.sqrt(2.0 * math.pi * s**3), 0.0)
    return float(density) if density.ndim == 0 else density


def sample_squared_bessel(gamma_dim: float, t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """Squared Bessel process from 0 at time t: a gamma law with shape gamma_dim/2 and scale 2t."""
    if gamma_dim <= 0:
        raise DomainError(f"gamma_dim must be positive, got {gamma_dim}")
    _check_time(t, strict=True)
    return _out(rng.gamma(gamma_dim / 2.0, 2.0 * t, size), size)


def squared_bessel_density(gamma_dim: float, x: float | np.ndarray, t: float) -> float | np.ndarray:
    return stats.gamma.pdf(x, a=gamma_dim / 2.0, scale=2.0 * t)


def sample_arcsine(t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """Time spent positive by Brownian motion on [0, t]."""
    _check_time(t, strict=True)
    return _out(t * np.sin(0.5 * math.pi * rng.uniform(size=size)) ** 2, size)


def arcsine_density(x: float | np.ndarray, t: float) -> float | np.ndarray:
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        density = np.where((x > 0) & (x < t), 1.0 / (math.pi * np.sqrt(x * (t - x))), 0.0)
    return float(density) if density.ndim == 0 else density


def elastic_survival(c: float, t: float) -> float:
    """E_{1/2,1}(-c sqrt(t/2)) = erfcx(c sqrt(t/2)), the probability of no absorption at rate c."""
    return float(erfcx(c * math.sqrt(t / 2.0)))


def elastic_q(gamma_el: float, t: float) -> float:
    """Probability that elastic Brownian motion is absorbed at zero by time t."""
    if gamma_el <= 0:
        raise DomainError(f"gamma_el must be positive, got {gamma_el}")
    _check_time(t)
    return 1.0 - elastic_survival(gamma_el, t)


def elastic_density(gamma_el: float, s: float | np.ndarray, t: float) -> float | np.ndarray:
    """Continuous part of the elastic law at s >= 0; its mass is 1 - elastic_q."""
    _check_time(t, strict=True)
    s = np.asarray(s, dtype=float)
    kernel = 2.0 / math.sqrt(2.0 * math.pi * t) - gamma_el * erfcx((s + gamma_el * t) / math.sqrt(2.0 * t))
    density = np.where(s >= 0, np.exp(-(s**2) / (2.0 * t)) * kernel, 0.0)
    return float(density) if density.ndim == 0 else density


def sample_elastic(gamma_el: float, t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """Reflected Brownian motion killed at rate gamma_el times local time; 0 when absorbed.

    (M - B, M) has the law of (|B|, L) for the running maximum M, and M given
    B = b is drawn by inverting P{M >= m | B = b} = exp(-2m(m - b)/t).
    """
    if gamma_el <= 0:
        raise DomainError(f"gamma_el must be positive, got {gamma_el}")
    _check_time(t, strict=True)
    b = math.sqrt(t) * rng.standard_normal(size)
    e = rng.standard_exponential(size)
    m = 0.5 * (b + np.sqrt(b * b + 2.0 * t * e))
    survives = rng.uniform(size=size) < np.exp(-gamma_el * m)
    return _out(np.where(survives, m - b, 0.0), size)


def incgamma_arrival_rate(alpha: float, epsilon: float = 1.0) -> float:
    return alpha * math.gamma(alpha) * epsilon ** (-alpha)


def tempered_arrival_rate(alpha: float, theta: float) -> float:
    return alpha * (math.gamma(alpha) - lower_inc_gamma(alpha, theta))


def incgamma_jump_density(alpha: float, x: float | np.ndarray, epsilon: float = 1.0) -> float | np.ndarray:
    """(y - 1)^{-alpha} y^{-1} / (Gamma(1 - alpha) Gamma(alpha)) at y = x / epsilon, on x > epsilon."""
    y = np.asarray(x, dtype=float) / epsilon
    norm = gamma_fn(1.0 - alpha) * gamma_fn(alpha) * epsilon
    with np.errstate(divide="ignore", invalid="ignore"):
        density = np.where(y > 1, (y - 1.0) ** (-alpha) / (y * norm), 0.0)
    return float(density) if density.ndim == 0 else density


def _incgamma_jumps(alpha: float, epsilon: float, count: int, rng: np.random.Generator) -> np.ndarray:
    return epsilon / rng.beta(alpha, 1.0 - alpha, count)


def _tempered_jumps(alpha: float, theta: float, count: int, rng: np.random.Generator, cap: int) -> np.ndarray:
    accepted: list[np.ndarray] = []
    needed = count
    rejections = 0
    while needed > 0:
        batch = max(2 * needed, 16)
        proposals = _incgamma_jumps(alpha, 1.0, batch, rng)
        keep = proposals[rng.uniform(size=batch) < np.exp(-theta * (proposals - 1.0))][:needed]
        rejections += batch - keep.size
        if rejections > cap:
            raise RejectionCapError(f"tempered jump sampler rejected more than {cap} proposals")
        accepted.append(keep)
        needed -= keep.size
    return np.concatenate(accepted) if accepted else np.zeros(0)


def _check_subordinator(alpha: float, epsilon: float = 1.0, theta: float | None = None) -> None:
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if theta is not None and theta <= 0:
        raise DomainError(f"theta must be positive, got {theta}")


def _compound_path(rate: float, horizon: float, jumps, rng: np.random.Generator) -> ClockPath:
    count = rng.poisson(rate * horizon)
    epochs = np.sort(rng.uniform(0.0, horizon, count))
    sizes = jumps(count)
    return ClockPath(np.concatenate(([0.0], epochs)), np.concatenate(([0.0], np.cumsum(sizes))))


def _compound_at(rate: float, t: float, jumps, rng: np.random.Generator, size: Size) -> float | np.ndarray:
    counts = rng.poisson(rate * t, size)
    flat = np.atleast_1d(counts).ravel()
    owners = np.repeat(np.arange(flat.size), flat)
    totals = np.bincount(owners, weights=jumps(int(flat.sum())), minlength=flat.size)
    return _out(totals.reshape(np.shape(counts)), size)


def sample_incgamma(alpha: float, epsilon: float, horizon: float, rng: np.random.Generator) -> ClockPath:
    """Compound-Poisson path of the incomplete-gamma subordinator with jumps >= epsilon."""
    _check_subordinator(alpha, epsilon)
    _check_time(horizon, strict=True)
    return _compound_path(
        incgamma_arrival_rate(alpha, epsilon),
        horizon,
        lambda count: _incgamma_jumps(alpha, epsilon, count, rng),
        rng,
    )


def sample_incgamma_at(
    alpha: float, epsilon: float, t: float, rng: np.random.Generator, size: Size = None
) -> float | np.ndarray:
    _check_subordinator(alpha, epsilon)
    _check_time(t)
    return _compound_at(
        incgamma_arrival_rate(alpha, epsilon), t, lambda count: _incgamma_jumps(alpha, epsilon, count, rng), rng, size
    )


def sample_tempered_incgamma(alpha: float, theta: float, horizon: float, rng: np.random.Generator) -> ClockPath:
    _check_subordinator(alpha, theta=theta)
    _check_time(horizon, strict=True)
    cap = get_settings().rejection_cap
    return _compound_path(
        tempered_arrival_rate(alpha, theta),
        horizon,
        lambda count: _tempered_jumps(alpha, theta, count, rng, cap),
        rng,
    )


def sample_tempered_incgamma_at(
    alpha: float, theta: float, t: float, rng: np.random.Generator, size: Size = None
) -> float | np.ndarray:
    _check_subordinator(alpha, theta=theta)
    _check_time(t)
    cap = get_settings().rejection_cap
    return _compound_at(
        tempered_arrival_rate(alpha, theta), t, lambda count: _tempered_jumps(alpha, theta, count, rng, cap), rng, size
    )


def sample_clock(spec: ClockSpec, t: float, rng: np.random.Generator, size: Size = None) -> float | np.ndarray:
    """Marginal draw of the clock at time t."""
    kind = spec.kind
    if kind == ClockKind.STABLE:
        return sample_stable(spec.alpha, t, rng, size)
    if kind == ClockKind.INVERSE_STABLE:
        return sample_inverse_stable(spec.beta, t, rng, size)
    if kind == ClockKind.FIRST_PASSAGE:
        return sample_first_passage(t, rng, size)
    if kind == ClockKind.FIRST_PASSAGE_DRIFT:
        return sample_first_passage_drift(spec.mu, t, rng, size)
    if kind == ClockKind.SQUARED_BESSEL:
        return sample_squared_bessel(spec.gamma_dim, t, rng, size)
    if kind == ClockKind.ARCSINE_SOJOURN:
        return sample_arcsine(t, rng, size)
    if kind == ClockKind.ELASTIC:
        return sample_elastic(spec.gamma_el, t, rng, size)
    if kind == ClockKind.INC_GAMMA:
        return sample_incgamma_at(spec.alpha, spec.epsilon, t, rng, size)
    return sample_tempered_incgamma_at(spec.alpha, spec.theta, t, rng, size)


def clock_laplace(spec: ClockSpec, t: float, s: float) -> float:
    """E exp(-s X(t)) for the clocks whose Laplace transform is known in closed form."""
    if s < 0:
        raise DomainError("Laplace argument must be non-negative")
    kind = spec.kind
    if kind == ClockKind.STABLE:
        return math.exp(-t * s**spec.alpha)
    if kind == ClockKind.INVERSE_STABLE:
        return ml3(spec.beta, 1.0, 1.0, -s * t**spec.beta)
    if kind == ClockKind.FIRST_PASSAGE:
        return math.exp(-t * math.sqrt(2.0 * s))
    if kind == ClockKind.FIRST_PASSAGE_DRIFT:
        return math.exp(spec.mu * t - t * math.sqrt(spec.mu**2 + 2.0 * s))
    if kind == ClockKind.SQUARED_BESSEL:
        return (1.0 + 2.0 * s * t) ** (-spec.gamma_dim / 2.0)
    if kind == ClockKind.INC_GAMMA:
        a, eps = spec.alpha, spec.epsilon
        return math.exp(-a * t * eps ** (-a) * lower_inc_gamma(a, s * eps))
    if kind == ClockKind.TEMPERED_INC_GAMMA:
        a, theta = spec.alpha, spec.theta
        return math.exp(-a * t * (lower_inc_gamma(a, s + theta) - lower_inc_gamma(a, theta)))
    raise DomainError(f"no closed-form Laplace transform wired for {kind.value}")
