from __future__ import annotations

import numpy as np

from src.models.experiment import Family
from src.models.params import GcpParams
from src.montecarlo.estimators import covariance_estimate, mean_estimate, variance_estimate
from src.processes.gcp_core import enumerate_omega, gcp_moments, gcp_ode_residual, gcp_pmf, gcp_pmf_table
from src.verification.base_suite import (
    MOMENT_REPS,
    RATES,
    TV_N_MAX,
    BaseVerificationSuite,
    VerificationContext,
    config_for,
)
from src.workflow.families import FamilyModel, build_family


class GcpSuite(BaseVerificationSuite):
    """The base counting process: law, recursion, forward equations and moments."""

    name = "gcp"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking the generalized counting process")
        p = GcpParams(rates=tuple(RATES))
        model = build_family(config_for(Family.GCP))

        self._record(
            "omega_size",
            all(len(enumerate_omega(2, n)) == n // 2 + 1 for n in range(25)),
            message="|Omega(2, n)| = floor(n / 2) + 1",
        )
        table = gcp_pmf_table(p, TV_N_MAX, 1.0)
        direct = np.array([gcp_pmf(p, n, 1.0) for n in range(TV_N_MAX + 1)])
        self._close("panjer_vs_composition", float(np.max(np.abs(table - direct))), 0.0, 1e-12)
        self._close("pmf_example[n=2]", gcp_pmf(GcpParams.of(1.0, 1.0), 2, 1.0), 0.203003, 5e-7)

        self._normalization_checks(context, model, "gcp")
        self._ode_checks(
            context,
            "gcp",
            lambda n, h: gcp_ode_residual(p, n, 1.0, h),
            lambda n: gcp_pmf(p, n, 1.0),
            range(0, 6),
        )

        await self._guard_async("pmf_tv[gcp]", lambda: self._pmf_distance(context, model, "gcp", 1.0, direct))
        await self._guard_async("moments[gcp]", lambda: self._moment_checks(context, p, model))

    async def _moment_checks(self, context: VerificationContext, p: GcpParams, model: FamilyModel) -> None:
        s, t = 1.0, 2.0
        expected = gcp_moments(p, s, t)
        pairs = await self._mc(context, model.joint_sampler(s, t), context.reps_for(MOMENT_REPS), "moments")
        self._within_se("mean[gcp]", mean_estimate(pairs[:, 1]), expected.mean, context.seed)
        self._within_se("var[gcp]", variance_estimate(pairs[:, 1]), expected.var, context.seed)
        self._within_se("cov[gcp]", covariance_estimate(pairs[:, 0], pairs[:, 1]), expected.cov, context.seed)
