from __future__ import annotations

from src.models.experiment import ElasticMethod, Family
from src.models.params import GcpParams
from src.montecarlo.estimators import mean_estimate, variance_estimate
from src.processes.brownian_timechange import (
    bessel_pmf,
    elastic_pmf,
    fp_ode_residual,
    fp_pmf,
    fpd_ode_residual,
    fpd_pmf,
    sojourn_pgf,
    sojourn_pgf_bessel,
)
from src.verification.base_suite import (
    MOMENT_REPS,
    RATES,
    BaseVerificationSuite,
    VerificationContext,
    config_for,
)
from src.workflow.families import build_family

ELASTIC_TOL = 1e-6
GAMMA_EL = 1.5
FAMILIES = {
    "fp": config_for(Family.FP),
    "fpd[mu=0.5]": config_for(Family.FPD, mu=0.5),
    "fpd[mu=0]": config_for(Family.FPD, mu=0.0),
    "fpd[mu=-0.5]": config_for(Family.FPD, mu=-0.5),
    "bessel": config_for(Family.BESSEL, gamma_dim=2.0),
    "elastic": config_for(Family.ELASTIC, gamma_el=GAMMA_EL),
    "sojourn": config_for(Family.SOJOURN),
}
SAMPLED = ("fp", "fpd[mu=0.5]", "bessel", "elastic", "sojourn")


class BrownianSuite(BaseVerificationSuite):
    """GCP under Brownian clocks: laws, forward equations, elastic forms and moments."""

    name = "brownian"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking Brownian time changes")
        p = GcpParams(rates=tuple(RATES))
        models = {label: build_family(config) for label, config in FAMILIES.items()}

        self._close("bessel_example[n=0]", bessel_pmf(GcpParams.of(1.0), 2.0, 0, 1.0), 1.0 / 3.0, 1e-12)
        for label, model in models.items():
            self._normalization_checks(context, model, label)

        self._ode_checks(context, "fp", lambda n, h: fp_ode_residual(p, n, 1.0, h), lambda n: fp_pmf(p, n, 1.0), range(0, 5))
        for mu in (0.5, -0.5):
            self._ode_checks(
                context,
                f"fpd[mu={mu}]",
                lambda n, h: fpd_ode_residual(p, mu, n, 1.0, h),
                lambda n: fpd_pmf(p, mu, n, 1.0),
                range(0, 5),
            )

        self._elastic_forms(context, p)
        for u in (-0.5, 0.3, 0.9):
            self._close(f"sojourn_pgf_forms[u={u}]", float(sojourn_pgf_bessel(p, u, 1.0)), sojourn_pgf(p, u, 1.0), 1e-10)

        for label in SAMPLED:
            await self._guard_async(f"pmf_tv[{label}]", lambda: self._pmf_distance(context, models[label], label, 1.0))
        for label in ("fpd[mu=0.5]", "bessel", "sojourn"):
            await self._guard_async(f"moments[{label}]", lambda: self._moment_checks(context, models[label], label))

    def _elastic_forms(self, context: VerificationContext, p: GcpParams) -> None:
        tol = context.tolerance("elastic", ELASTIC_TOL)
        t = 1.0
        for n in range(5):
            series = elastic_pmf(p, GAMMA_EL, n, t, ElasticMethod.SERIES)
            self._guard(
                f"elastic_series_vs_quadrature[n={n}]",
                lambda: self._close(
                    f"elastic_series_vs_quadrature[n={n}]",
                    series,
                    elastic_pmf(p, GAMMA_EL, n, t, ElasticMethod.QUADRATURE),
                    tol,
                ),
            )
            self._guard(
                f"elastic_derivative_vs_series[n={n}]",
                lambda: self._close(
                    f"elastic_derivative_vs_series[n={n}]",
                    elastic_pmf(p, GAMMA_EL, n, t, ElasticMethod.DERIVATIVE),
                    series,
                    tol,
                ),
            )
        # equal rates: Lambda = gamma_el = 1
        for n in range(4):
            self._guard(
                f"elastic_equal_rate[n={n}]",
                lambda: self._close(
                    f"elastic_equal_rate[n={n}]",
                    elastic_pmf(p, 1.0, n, t, ElasticMethod.EQUAL_RATE),
                    elastic_pmf(p, 1.0, n, t, ElasticMethod.QUADRATURE),
                    tol,
                ),
            )

    async def _moment_checks(self, context: VerificationContext, model, label: str) -> None:
        t = 1.0
        expected = model.moments_at(t)
        counts = await self._mc(context, model.sample_counts(t), context.reps_for(MOMENT_REPS), f"moments/{label}")
        self._within_se(f"mean[{label}]", mean_estimate(counts), expected.mean, context.seed)
        self._within_se(f"var[{label}]", variance_estimate(counts), expected.var, context.seed)
        if expected.factorial_moment2 is not None:
            values = counts.astype(float)
            self._within_se(
                f"factorial_moment2[{label}]",
                mean_estimate(values * (values - 1.0)),
                expected.factorial_moment2,
                context.seed,
            )
