from __future__ import annotations

import math

from src.models.params import GcpParams
from src.montecarlo.estimators import laplace_estimate
from src.processes.drifted_gcp import (
    atom_laplace,
    drifted_laplace,
    drifted_laplace_ode_residual,
    drifted_law,
    gstfcp_drift_laplace,
    hitting_boundary_laplace_gap,
    hitting_refinement_study,
    sample_gstfcp_drift,
)
from src.processes.subordinated_gcp import gsfcp_laplace
from src.verification.base_suite import (
    ODE_STEP,
    ODE_TOL,
    RATES,
    TRANSFORM_REPS,
    BaseVerificationSuite,
    VerificationContext,
)

DRIFT = 0.5
ALPHA, GAMMA, BETA = 0.6, 0.7, 0.8
LAPLACE_ARGS = (0.5, 1.0, 2.0)
BOUNDARY_GAP = 1e-3
DUALITY_GAP = 0.02
REFINEMENT_SHIFT = 0.01
DUALITY_X, DUALITY_LEVEL = 1.0, 2.0


class DriftSuite(BaseVerificationSuite):
    """Drifted GCP, the stable-drift Laplace functional and hitting times."""

    name = "drift"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking drifted processes and hitting times")
        p = GcpParams(rates=tuple(RATES))
        t = 1.0

        law = drifted_law(p, DRIFT, t)
        self._close("drifted_mass", law.total_mass(), 1.0, 1e-8)
        tol = context.tolerance("ode", ODE_TOL)
        for s in LAPLACE_ARGS:
            self._close(f"drifted_atoms[s={s}]", atom_laplace(law, s), drifted_laplace(p, DRIFT, s, t), 1e-10)
            residual = drifted_laplace_ode_residual(p, DRIFT, s, t, ODE_STEP) / drifted_laplace(p, DRIFT, s, t)
            self._below(f"drifted_ode[s={s}]", abs(residual), tol)
            self._close(
                f"gstfcp_reduction[s={s}]",
                gstfcp_drift_laplace(p, 0.0, ALPHA, GAMMA, 1.0, s, t),
                gsfcp_laplace(p, GAMMA, s, t),
                1e-12,
            )

        for eta in (0.5, 1.0, 2.0):
            gap = self._guard(
                f"boundary_laplace_gap[eta={eta}]",
                lambda: hitting_boundary_laplace_gap(p, GAMMA, eta, t_max=60.0),
            )
            if gap is not None:
                self._below(f"boundary_laplace_gap[eta={eta}]", gap, context.tolerance("boundary", BOUNDARY_GAP))

        await self._guard_async("laplace[gstfcp_drift]", lambda: self._gstfcp_laplace(context, p, t))
        await self._guard_async("hitting_duality", lambda: self._duality(context, p))

    async def _gstfcp_laplace(self, context: VerificationContext, p: GcpParams, t: float) -> None:
        values = await self._mc(
            context,
            lambda rng, size: sample_gstfcp_drift(p, DRIFT, ALPHA, GAMMA, BETA, t, rng, size),
            context.reps_for(TRANSFORM_REPS),
            "gstfcp_drift",
        )
        for eta in LAPLACE_ARGS:
            self._within_se(
                f"laplace[gstfcp_drift,eta={eta}]",
                laplace_estimate(values, eta),
                gstfcp_drift_laplace(p, DRIFT, ALPHA, GAMMA, BETA, eta, t),
                context.seed,
            )

    async def _duality(self, context: VerificationContext, p: GcpParams) -> None:
        reps = context.reps_for(TRANSFORM_REPS)
        study = await self._offload(
            lambda: hitting_refinement_study(
                p, DRIFT, ALPHA, GAMMA, DUALITY_X, DUALITY_LEVEL, reps, context.grid_step, context.engine, levels=2
            )
        )
        for estimate in study:
            self._below(f"hitting_duality[step={estimate.grid_step:g}]", estimate.gap.value, DUALITY_GAP, context.seed)
        shift = abs(study[0].survival.value - study[1].survival.value)
        self._below("hitting_refinement", shift, REFINEMENT_SHIFT, context.seed)
        coarse, fine = study[0].gap, study[1].gap
        self._record(
            "hitting_refinement_monotone",
            fine.value <= coarse.value + 3.0 * math.hypot(coarse.stderr, fine.stderr),
            fine.value,
            coarse.value,
            3.0 * math.hypot(coarse.stderr, fine.stderr),
            context.seed,
            message="gap does not grow when the grid step is halved",
        )
