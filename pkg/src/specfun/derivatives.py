from __future__ import annotations

from enum import Enum
from typing import Mapping

import numpy as np

from src.config.settings import get_settings
from src.errors import DomainError, JetOrderError
from src.specfun.functions import lower_inc_gamma
from src.specfun.jets import TaylorJet
from src.specfun.mittag_leffler import ml_taylor_coefficients


class PhiKind(str, Enum):
    STABLE_POWER = "stable-power"
    TEMPERED_INCGAMMA = "tempered-incgamma"
    INCGAMMA = "incgamma"


def _check_order(order: int) -> None:
    cap = get_settings().jet_max_order
    if order < 0:
        raise DomainError("jet order must be non-negative")
    if order > cap:
        raise JetOrderError(f"jet order {order} exceeds the configured maximum {cap}")


def _unit(value: float | None, name: str, *, closed: bool = True) -> float:
    if value is None or not (0 < value < 1 or (closed and value == 1)):
        raise DomainError(f"{name} must lie in (0, 1{']' if closed else ')'}, got {value}")
    return float(value)


def phi_jet(kind: PhiKind | str, params: Mapping[str, float], center: float, order: int) -> TaylorJet:
    """Jet of the Laplace exponent phi at Lambda - h, so coefficient r is (-1)^r phi^(r)(Lambda) / r!."""
    kind = PhiKind(kind)
    x = TaylorJet.variable(center, order, direction=-1.0)
    if kind == PhiKind.STABLE_POWER:
        return x ** _unit(params.get("beta"), "beta")

    alpha = _unit(params.get("alpha"), "alpha")
    if kind == PhiKind.TEMPERED_INCGAMMA:
        theta = params.get("theta")
        if theta is None or theta <= 0:
            raise DomainError(f"tempered exponent needs theta > 0, got {theta}")
        shifted = x + theta
        slope = alpha * (-shifted).exp() * shifted ** (alpha - 1.0)
        value = alpha * (lower_inc_gamma(alpha, center + theta) - lower_inc_gamma(alpha, theta))
    else:
        epsilon = params.get("epsilon", 1.0)
        if epsilon <= 0:
            raise DomainError(f"incomplete-gamma exponent needs epsilon > 0, got {epsilon}")
        slope = alpha * (-epsilon * x).exp() * x ** (alpha - 1.0)
        value = alpha * epsilon ** (-alpha) * lower_inc_gamma(alpha, center * epsilon)
    # d/dh phi(Lambda - h) = -phi'(Lambda - h)
    return (-slope).integrate(value)


def exp_phi_jet(
    kind: PhiKind | str,
    params: Mapping[str, float],
    t: float,
    center: float,
    order: int,
) -> np.ndarray:
    """(-1)^r d^r/dLambda^r exp(-t phi(Lambda)) for r = 0..order."""
    if center <= 0:
        raise DomainError(f"jets are expanded at Lambda > 0, got {center}")
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    _check_order(order)
    return (-t * phi_jet(kind, params, center, order)).exp().derivatives()


def inverse_stable_mixture_jet(beta: float, gamma: float, t: float, center: float, order: int) -> np.ndarray:
    """(-1)^r d^r/dLambda^r E_{beta,1}(-t^beta Lambda^gamma) for r = 0..order."""
    beta = _unit(beta, "beta")
    gamma = _unit(gamma, "gamma")
    if center <= 0 or t < 0:
        raise DomainError("need Lambda > 0 and t >= 0")
    _check_order(order)
    x = TaylorJet.variable(center, order, direction=-1.0)
    inner = -(t**beta) * x**gamma
    outer = ml_taylor_coefficients(beta, 1.0, inner.value, order)
    return inner.compose(outer).derivatives()
