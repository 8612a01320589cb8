from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from src.models.params import ClockKind, ClockSpec
from src.montecarlo.estimators import laplace_estimate, mean_estimate
from src.processes.clocks import clock_laplace, elastic_density, elastic_q, first_passage_drift_density, sample_clock
from src.verification.base_suite import TRANSFORM_REPS, BaseVerificationSuite, VerificationContext

LAPLACE_ARGS = (0.5, 1.0, 2.0)
CLOCKS = (
    ClockSpec(kind=ClockKind.STABLE, alpha=0.6),
    ClockSpec(kind=ClockKind.INVERSE_STABLE, beta=0.7),
    ClockSpec(kind=ClockKind.FIRST_PASSAGE),
    ClockSpec(kind=ClockKind.FIRST_PASSAGE_DRIFT, mu=0.5),
    ClockSpec(kind=ClockKind.FIRST_PASSAGE_DRIFT, mu=-0.5),
    ClockSpec(kind=ClockKind.SQUARED_BESSEL, gamma_dim=2.0),
    ClockSpec(kind=ClockKind.INC_GAMMA, alpha=0.6),
    ClockSpec(kind=ClockKind.TEMPERED_INC_GAMMA, alpha=0.6, theta=1.0),
)


def _label(spec: ClockSpec) -> str:
    extras = [f"{name}={value}" for name, value in spec.model_dump(exclude={"kind", "epsilon"}).items() if value is not None]
    return spec.kind.value + (f"[{','.join(extras)}]" if extras else "")


class ClocksSuite(BaseVerificationSuite):
    """Random clocks: sampled Laplace transforms against the closed forms."""

    name = "clocks"

    async def run(self, context: VerificationContext) -> None:
        self._log_execution("Checking clock samplers")
        t = 1.0
        reps = context.reps_for(TRANSFORM_REPS)
        for spec in CLOCKS:
            label = _label(spec)
            await self._guard_async(f"laplace[{label}]", lambda: self._laplace_checks(context, spec, label, t, reps))
        await self._guard_async("elastic_atom", lambda: self._elastic_atom(context, t, reps))
        self._density_masses(t)

    async def _laplace_checks(self, context: VerificationContext, spec: ClockSpec, label: str, t: float, reps: int) -> None:
        samples = await self._mc(context, lambda rng, size: np.atleast_1d(sample_clock(spec, t, rng, size)), reps, label)
        for s in LAPLACE_ARGS:
            self._within_se(f"laplace[{label},s={s}]", laplace_estimate(samples, s), clock_laplace(spec, t, s), context.seed)

    async def _elastic_atom(self, context: VerificationContext, t: float, reps: int) -> None:
        spec = ClockSpec(kind=ClockKind.ELASTIC, gamma_el=1.5)
        samples = await self._mc(context, lambda rng, size: sample_clock(spec, t, rng, size), reps, "elastic")
        self._within_se("elastic_atom", mean_estimate((samples == 0).astype(float)), elastic_q(1.5, t), context.seed)

    def _density_masses(self, t: float) -> None:
        for mu in (0.5, -0.5):
            mass, _ = integrate.quad(lambda s: first_passage_drift_density(mu, s, t), 0.0, np.inf, epsabs=1e-12, limit=200)
            expected = 1.0 if mu >= 0 else math.exp(2.0 * mu * t)
            self._close(f"first_passage_drift_mass[mu={mu}]", mass, expected, 1e-8)
        alive, _ = integrate.quad(lambda s: elastic_density(1.5, s, t), 0.0, np.inf, epsabs=1e-12, limit=200)
        self._close("elastic_mass", alive + elastic_q(1.5, t), 1.0, 1e-8)
