from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import integrate
from scipy.special import erfcx

from src.models.params import GcpParams
from src.processes.gcp_core import gcp_pgf, gcp_pmf
from src.specfun.derivatives import PhiKind, exp_phi_jet, inverse_stable_mixture_jet
from src.specfun.functions import bessel_k_halfint, kummer1f1
from src.specfun.inversion import pgf_coefficients
from src.specfun.mittag_leffler import ml3, ml3_derivative
from src.verification.base_suite import BaseVerificationSuite, VerificationContext

ORACLE_TOL = 1e-10
JET_TOL = 1e-6
FD_STEP = 1e-4
# second differences lose h^-2 of rounding, so they get a wider step
SECOND_STEP = 1e-3


def _ml3_reference(alpha: float, beta: float, gamma: float, x: float, terms: int = 400) -> float:
    with mpmath.workdps(60):
        return float(
            mpmath.fsum(
                mpmath.rf(gamma, j)
                * mpmath.mpf(x) ** j
                / (mpmath.factorial(j) * mpmath.gamma(mpmath.mpf(alpha) * j + beta))
                for j in range(terms)
            )
        )


def _bessel_integral(nu: float, z: float) -> float:
    """K_nu(z) = int_0^inf exp(-z cosh u) cosh(nu u) du, cut where the integrand is below exp(-750)."""
    upper = math.acosh((800.0 + 20.0 * abs(nu)) / z)

    def integrand(u: float) -> float:
        decay = -z * math.cosh(u)
        return 0.5 * (math.exp(decay + nu * u) + math.exp(decay - nu * u))

    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-13, limit=200)
    return value


def _central(f, x: float, h: float, order: int) -> float:
    if order == 1:
        return (f(x + h) - f(x - h)) / (2.0 * h)
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / h**2


class SpecfunSuite(BaseVerificationSuite):
    """Special functions against independent evaluations."""

    name = "specfun"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking special functions")
        tol = context.tolerance("specfun", ORACLE_TOL)
        self._bessel_against_quadrature(tol)
        self._mittag_leffler_identities(tol)
        self._kummer_transform(tol)
        self._jets_against_differences(context.tolerance("jets", JET_TOL))
        self._pgf_inversion(tol)

    def _bessel_against_quadrature(self, tol: float) -> None:
        for m in (0, 1, 3, 6):
            for z in (0.5, 2.0, 10.0):
                self._guard(
                    f"bessel_k_halfint[m={m},z={z}]",
                    lambda: self._close(
                        f"bessel_k_halfint[m={m},z={z}]",
                        bessel_k_halfint(m, z),
                        _bessel_integral(m - 0.5, z),
                        tol,
                        relative=True,
                    ),
                )

    def _mittag_leffler_identities(self, tol: float) -> None:
        for x in (0.1, 1.0, 4.0):
            self._guard(
                f"ml_erfc[x={x}]",
                lambda: self._close(f"ml_erfc[x={x}]", ml3(0.5, 1.0, 1.0, -x), float(erfcx(x)), tol, relative=True),
            )
        for x in (-3.0, 2.0):
            self._guard(
                f"ml_exponential[x={x}]",
                lambda: self._close(f"ml_exponential[x={x}]", ml3(1.0, 1.0, 1.0, x), math.exp(x), tol, relative=True),
            )
        for alpha, beta, gamma, x in ((0.6, 1.2, 2.5, -5.0), (0.8, 1.0, 1.0, 7.0)):
            reference = _ml3_reference(alpha, beta, gamma, x)
            self._guard(
                f"ml3_series[{alpha},{beta},{gamma},{x}]",
                lambda: self._close(
                    f"ml3_series[{alpha},{beta},{gamma},{x}]", ml3(alpha, beta, gamma, x), reference, tol, relative=True
                ),
            )
        h = FD_STEP
        numeric = _central(lambda y: ml3(0.7, 1.0, 1.0, y), -1.5, h, 1)
        self._guard(
            "ml3_derivative",
            lambda: self._close("ml3_derivative", ml3_derivative(0.7, 1.0, 1.0, 1, -1.5), numeric, JET_TOL, relative=True),
        )

    def _kummer_transform(self, tol: float) -> None:
        for a, b, x in ((0.5, 3.0, 2.5), (0.5, 1.0, -4.0), (1.5, 2.0, 12.0)):
            self._guard(
                f"kummer_transform[{a},{b},{x}]",
                lambda: self._close(
                    f"kummer_transform[{a},{b},{x}]",
                    kummer1f1(a, b, x),
                    math.exp(x) * kummer1f1(b - a, b, -x),
                    tol,
                    relative=True,
                ),
            )
        self._guard(
            "kummer_mpmath",
            lambda: self._close(
                "kummer_mpmath", kummer1f1(0.5, 4.0, -30.0), float(mpmath.hyp1f1(0.5, 4.0, -30.0)), tol, relative=True
            ),
        )

    def _jets_against_differences(self, tol: float) -> None:
        lam, t, beta, h = 1.0, 1.0, 0.6, FD_STEP

        def stable(x: float) -> float:
            return math.exp(-t * x**beta)

        jet = exp_phi_jet(PhiKind.STABLE_POWER, {"beta": beta}, t, lam, 2)
        # jets hold (-d/dLambda)^r
        for order, sign, step in ((1, -1.0, h), (2, 1.0, SECOND_STEP)):
            self._guard(
                f"stable_jet[r={order}]",
                lambda: self._close(
                    f"stable_jet[r={order}]", jet[order], sign * _central(stable, lam, step, order), tol, relative=True
                ),
            )

        def mixture(x: float) -> float:
            return ml3(0.7, 1.0, 1.0, -(t**0.7) * x**0.8)

        mixed = inverse_stable_mixture_jet(0.7, 0.8, t, lam, 2)
        for order, sign, step in ((1, -1.0, h), (2, 1.0, SECOND_STEP)):
            self._guard(
                f"mixture_jet[r={order}]",
                lambda: self._close(
                    f"mixture_jet[r={order}]", mixed[order], sign * _central(mixture, lam, step, order), tol, relative=True
                ),
            )

    def _pgf_inversion(self, tol: float) -> None:
        p = GcpParams.of(0.7, 0.3)
        coefficients = pgf_coefficients(lambda u: gcp_pgf(p, u, 1.0), 10)
        exact = np.array([gcp_pmf(p, n, 1.0) for n in range(11)])
        self._close("pgf_inversion", float(np.max(np.abs(coefficients - exact))), 0.0, tol)
