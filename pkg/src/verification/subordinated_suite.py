from __future__ import annotations

from src.errors import InsufficientSamplesError
from src.models.experiment import Family
from src.models.params import GcpParams
from src.montecarlo.estimators import covariance_estimate, mean_estimate, survival_slope, variance_estimate
from src.processes.subordinated_gcp import (
    gsfcp_pmf,
    gstfcp_pmf,
    incgamma_gcp_pmf,
    incgamma_gcp_small_n,
    incgamma_tail_slope,
    tempered_corr_ratio,
    tempered_gcp_pmf,
    tempered_gcp_small_n,
    tempered_tail_samples,
    tempered_tail_slope,
)
from src.verification.base_suite import (
    MOMENT_REPS,
    RATES,
    TAIL_REPS,
    BaseVerificationSuite,
    VerificationContext,
    config_for,
)
from src.workflow.families import build_family

TAIL_GRID = (1e2, 3e2, 1e3, 3e3, 1e4)
TAIL_TOL = 0.1
# (alpha, t): at alpha = 0.9 and t = 1 the last grid point sees too few exceedances
TAIL_CASES = ((0.5, 1.0), (0.9, 10.0))
# the tempering correction grows like sqrt(theta * y), so theta must make that small on the whole grid
SMALL_THETA = 1e-9
LRD_BAND = 0.01
FAMILIES = {
    "gfcp": config_for(Family.GFCP, beta=0.7),
    "gsfcp": config_for(Family.GSFCP, beta=0.7),
    "incgamma": config_for(Family.INCGAMMA, alpha=0.6),
    "tempered": config_for(Family.TEMPERED, alpha=0.6, theta=1.0),
    "gstfcp_drift": config_for(Family.GSTFCP_DRIFT, alpha=0.6, gamma=0.7, beta=0.8),
}
NORMALIZED = ("gsfcp", "incgamma", "tempered")


class SubordinatedSuite(BaseVerificationSuite):
    """GCP under stable, inverse stable and incomplete-gamma clocks."""

    name = "subordinated"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking subordinated processes")
        p = GcpParams(rates=tuple(RATES))
        models = {label: build_family(config) for label, config in FAMILIES.items()}

        for label in NORMALIZED:
            self._normalization_checks(context, models[label], label)
        self._closed_forms(p)

        for label, model in models.items():
            await self._guard_async(f"pmf_tv[{label}]", lambda: self._pmf_distance(context, model, label, 1.0))
        await self._guard_async("moments[tempered]", lambda: self._tempered_moments(context, models["tempered"]))

        ratio = tempered_corr_ratio(p, 0.6, 1.0, 1.0, 1e6)
        self._record("lrd_corr_ratio", abs(ratio - 1.0) <= LRD_BAND, ratio, 1.0, LRD_BAND)

        for alpha, t in TAIL_CASES:
            await self._guard_async(f"tail[incgamma,alpha={alpha}]", lambda: self._incgamma_tail(context, p, alpha, t))
        await self._guard_async("tail[tempered]", lambda: self._tempered_tails(context, p))

    def _closed_forms(self, p: GcpParams) -> None:
        t = 1.0
        jets = [incgamma_gcp_pmf(p, 0.6, 1.0, n, t) for n in range(3)]
        for n, closed in enumerate(incgamma_gcp_small_n(p, 0.6, 1.0, t)):
            self._close(f"incgamma_small_n[n={n}]", jets[n], closed, 1e-10, relative=True)
        jets = [tempered_gcp_pmf(p, 0.6, 1.0, n, t) for n in range(3)]
        for n, closed in enumerate(tempered_gcp_small_n(p, 0.6, 1.0, t)):
            self._close(f"tempered_small_n[n={n}]", jets[n], closed, 1e-10, relative=True)
        for n in range(6):
            self._close(f"gstfcp_unit_beta[n={n}]", gstfcp_pmf(p, 0.7, 1.0, n, t), gsfcp_pmf(p, 0.7, n, t), 1e-10)

    async def _tempered_moments(self, context: VerificationContext, model) -> None:
        s, t = 1.0, 2.0
        expected = model.moments_at(t, s)
        pairs = await self._mc(context, model.joint_sampler(s, t), context.reps_for(MOMENT_REPS), "moments/tempered")
        self._within_se("mean[tempered]", mean_estimate(pairs[:, 1]), expected.mean, context.seed)
        self._within_se("var[tempered]", variance_estimate(pairs[:, 1]), expected.var, context.seed)
        self._within_se("cov[tempered]", covariance_estimate(pairs[:, 0], pairs[:, 1]), expected.cov, context.seed)

    async def _incgamma_tail(self, context: VerificationContext, p: GcpParams, alpha: float, t: float) -> None:
        reps = context.reps_for(TAIL_REPS)
        slope = await self._offload(lambda: incgamma_tail_slope(p, alpha, 1.0, TAIL_GRID, t, reps, context.engine))
        self._record(
            f"tail[incgamma,alpha={alpha}]",
            abs(slope + alpha) <= TAIL_TOL,
            slope,
            -alpha,
            TAIL_TOL,
            context.seed,
            message=f"t={t} reps={reps}",
        )

    async def _tempered_tails(self, context: VerificationContext, p: GcpParams) -> None:
        reps = context.reps_for(TAIL_REPS)
        alpha = 0.5
        slope = await self._offload(
            lambda: tempered_tail_slope(p, alpha, SMALL_THETA, TAIL_GRID, 1.0, reps, context.engine)
        )
        self._record(
            f"tail[tempered,theta={SMALL_THETA}]",
            abs(slope + alpha) <= TAIL_TOL,
            slope,
            -alpha,
            TAIL_TOL,
            context.seed,
            message="power-law regime sqrt(theta * y) << 1",
        )
        # theta = 1: the tempered tail falls off faster than any power on the same scale
        samples = await self._offload(lambda: tempered_tail_samples(p, alpha, 1.0, 10.0, reps, context.engine))
        try:
            steep, _ = survival_slope(samples, (1.0, 2.0, 4.0, 8.0))
        except InsufficientSamplesError as exc:
            self._record("tail[tempered,theta=1]", False, seed=context.seed, message=f"{type(exc).__name__}: {exc}")
            return
        self._record(
            "tail[tempered,theta=1]",
            steep < -alpha,
            steep,
            -alpha,
            None,
            context.seed,
            message="steeper than the untempered asymptote",
        )
