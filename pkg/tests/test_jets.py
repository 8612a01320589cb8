import math

import numpy as np
import pytest

from src.errors import DomainError, JetOrderError
from src.specfun.derivatives import PhiKind, exp_phi_jet, inverse_stable_mixture_jet, phi_jet
from src.specfun.jets import TaylorJet


def test_exp_of_identity_has_unit_derivatives():
    jet = TaylorJet.variable(0.0, 5).exp()
    assert np.allclose(jet.derivatives(), np.ones(6))


def test_arithmetic_is_exact_truncated_series():
    x = TaylorJet.variable(3.0, 4)
    assert np.allclose((x * x).derivatives(), [9.0, 6.0, 2.0, 0.0, 0.0])
    assert np.allclose(((x * x) / x).coeffs, x.coeffs)
    assert np.allclose(x.exp().log().coeffs, x.coeffs)
    assert np.allclose((x**2.0).coeffs, (x * x).coeffs)
    assert np.allclose((1.0 - x + x).coeffs, TaylorJet.constant(3.0, 4, 1.0).coeffs)


def test_compose_with_exponential_series():
    x = TaylorJet.variable(0.2, 3)
    outer = [math.exp(0.2) / math.factorial(r) for r in range(4)]
    assert np.allclose(x.compose(outer).coeffs, x.exp().coeffs)


def test_integrate_inverts_differentiation():
    x = TaylorJet.variable(1.0, 3)
    integral = (x * x).integrate(1.0 / 3.0)
    assert np.allclose(integral.derivatives()[:3], [1.0 / 3.0, 1.0, 2.0])


def test_mismatched_orders_and_bad_values_are_rejected():
    with pytest.raises(DomainError):
        TaylorJet.variable(1.0, 2) + TaylorJet.variable(1.0, 3)
    with pytest.raises(DomainError):
        TaylorJet.variable(0.0, 2).log()
    with pytest.raises(DomainError):
        TaylorJet(0.0, [])


def test_unit_index_exponent_gives_poisson_moments():
    lam, t = 1.3, 0.8
    expected = [t**r * math.exp(-lam * t) for r in range(6)]
    assert np.allclose(exp_phi_jet(PhiKind.STABLE_POWER, {"beta": 1.0}, t, lam, 5), expected, rtol=1e-12)
    assert np.allclose(inverse_stable_mixture_jet(1.0, 1.0, t, lam, 5), expected, rtol=1e-10)


def test_incgamma_exponent_value_and_slope():
    alpha, lam = 0.6, 1.1
    jet = phi_jet(PhiKind.INCGAMMA, {"alpha": alpha, "epsilon": 1.0}, lam, 2)
    # coefficient 1 of phi(Lambda - h) is -phi'(Lambda)
    assert jet.coeffs[1] == pytest.approx(-alpha * math.exp(-lam) * lam ** (alpha - 1.0), rel=1e-12)


def test_stable_jet_matches_finite_differences():
    beta, t, lam, h = 0.7, 1.0, 1.0, 1e-4

    def f(x: float) -> float:
        return math.exp(-t * x**beta)

    derivatives = exp_phi_jet(PhiKind.STABLE_POWER, {"beta": beta}, t, lam, 2)
    first = -(f(lam + h) - f(lam - h)) / (2.0 * h)
    wide = 1e-3
    second = (f(lam + wide) - 2.0 * f(lam) + f(lam - wide)) / wide**2
    assert derivatives[1] == pytest.approx(first, rel=1e-6)
    assert derivatives[2] == pytest.approx(second, rel=1e-5)


def test_jet_order_cap():
    with pytest.raises(JetOrderError):
        exp_phi_jet(PhiKind.STABLE_POWER, {"beta": 0.5}, 1.0, 1.0, 65)
