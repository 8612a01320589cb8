from __future__ import annotations

import numpy as np

from src.models.outputs import McEstimate
from src.models.params import GcpParams
from src.montecarlo.estimators import mean_estimate, variance_estimate
from src.montecarlo.rng import substream
from src.processes.fracint import (
    fracint_conditional_mean,
    fracint_gcp_moments,
    fracint_gfcp_variance,
    gfcp_step_path,
    rl_integral_jumps,
    rl_integral_step,
    sample_gcp_rl_integrals,
)
from src.processes.gcp_core import simulate_gcp
from src.verification.base_suite import MOMENT_REPS, RATES, BaseVerificationSuite, VerificationContext

GRID = (0.5, 1.0, 2.0)
GFCP_REPS = 20_000
GFCP_REL_TOL = 0.10
GFCP_ORDER, GFCP_BETA, GFCP_T = 1.0, 0.7, 1.0
CONDITION_N = 2


class FracintSuite(BaseVerificationSuite):
    """Riemann-Liouville integrals of GCP and GFCP paths."""

    name = "fracint"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking fractional integrals")
        p = GcpParams(rates=tuple(RATES))

        rng = substream(context.seed, "verify/fracint/path", 0)
        path = simulate_gcp(p, 3.0, rng)
        for a in GRID:
            self._close(
                f"step_vs_jumps[a={a}]",
                rl_integral_step(path, a, 2.0),
                rl_integral_jumps(path.epochs, path.sizes, a, 2.0),
                1e-12 * max(1.0, abs(rl_integral_step(path, a, 2.0))),
            )
        limit = fracint_gcp_moments(p, GFCP_ORDER, GFCP_T).var
        self._guard(
            "gfcp_variance_unit_beta",
            lambda: self._close(
                "gfcp_variance_unit_beta",
                fracint_gfcp_variance(p, GFCP_ORDER, 0.999, GFCP_T),
                limit,
                1e-2,
                relative=True,
            ),
        )

        for a in GRID:
            for t in GRID:
                await self._guard_async(f"moments[gcp,a={a},t={t}]", lambda: self._gcp_moments(context, p, a, t))
        await self._guard_async("conditional_mean", lambda: self._conditional_mean(context, p))
        await self._guard_async("variance[gfcp]", lambda: self._gfcp_variance(context, p))

    async def _gcp_moments(self, context: VerificationContext, p: GcpParams, a: float, t: float) -> None:
        expected = fracint_gcp_moments(p, a, t)
        rows = await self._mc(
            context,
            lambda rng, size: sample_gcp_rl_integrals(p, a, t, rng, size),
            context.reps_for(MOMENT_REPS),
            f"gcp/{a}/{t}",
        )
        self._within_se(f"mean[gcp,a={a},t={t}]", mean_estimate(rows[:, 0]), expected.mean, context.seed)
        self._within_se(f"var[gcp,a={a},t={t}]", variance_estimate(rows[:, 0]), expected.var, context.seed)

    async def _conditional_mean(self, context: VerificationContext, p: GcpParams) -> None:
        a, t = 1.0, 1.0
        rows = await self._mc(
            context,
            lambda rng, size: sample_gcp_rl_integrals(p, a, t, rng, size),
            context.reps_for(MOMENT_REPS),
            "conditional",
        )
        kept = rows[rows[:, 1] == CONDITION_N, 0]
        self._within_se(
            f"conditional_mean[n={CONDITION_N}]",
            mean_estimate(kept),
            fracint_conditional_mean(p, a, CONDITION_N, t),
            context.seed,
        )

    async def _gfcp_variance(self, context: VerificationContext, p: GcpParams) -> None:
        """Variance under the gridded clock at two steps: each within 10% and stable under refinement."""
        reps = context.reps_for(GFCP_REPS)
        expected = fracint_gfcp_variance(p, GFCP_ORDER, GFCP_BETA, GFCP_T)
        estimates: list[McEstimate] = []
        for step in (context.grid_step, context.grid_step / 2.0):

            def block(rng: np.random.Generator, size: int, step: float = step) -> np.ndarray:
                return np.array(
                    [
                        rl_integral_step(gfcp_step_path(p, GFCP_BETA, GFCP_T, step, rng), GFCP_ORDER, GFCP_T)
                        for _ in range(size)
                    ]
                )

            values = await self._mc(context, block, reps, f"gfcp/{step}")
            estimate = variance_estimate(values)
            estimates.append(estimate)
            self._close(f"variance[gfcp,step={step:g}]", estimate.value, expected, GFCP_REL_TOL, relative=True)
        self._close(
            "variance[gfcp,refinement]", estimates[1].value, estimates[0].value, GFCP_REL_TOL, relative=True
        )
