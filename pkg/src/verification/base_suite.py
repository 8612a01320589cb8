from __future__ import annotations

import asyncio
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from src.errors import GcpLabError
from src.models.experiment import ExperimentConfig, Family
from src.models.outputs import CheckResult, McEstimate
from src.montecarlo.engine import BlockSampler, MonteCarloEngine
from src.montecarlo.estimators import empirical_pmf, total_variation
from src.utils.logger import setup_logger
from src.workflow.families import FamilyModel, normalization_report

# default replicate counts of the acceptance oracles
PMF_REPS = 200_000
TRANSFORM_REPS = 100_000
MOMENT_REPS = 200_000
TAIL_REPS = 1_000_000

RATES = [0.7, 0.3]
NORMALIZATION_TIMES = (0.5, 1.0, 2.0)
NORMALIZATION_TOL = 1e-6
TV_BOUND = 0.01
TV_N_MAX = 30
ODE_TOL = 1e-4
ODE_STEP = 1e-3


def config_for(family: Family, **values: Any) -> ExperimentConfig:
    return ExperimentConfig(family=family, rates=RATES, **values)


@dataclass
class VerificationContext:
    """Everything a suite needs from the caller: seed, engine and overrides."""

    seed: int
    engine: MonteCarloEngine
    reps: int | None = None
    tolerances: dict[str, float] = field(default_factory=dict)
    grid_step: float = 0.01

    def reps_for(self, default: int) -> int:
        return self.reps if self.reps else default

    def tolerance(self, name: str, default: float) -> float:
        return self.tolerances.get(name, default)


class BaseVerificationSuite(ABC):
    """A named group of checks. Suites never run other suites."""

    name: str = "base"

    def __init__(self) -> None:
        self.logger = setup_logger(f"verify.{self.name}")
        self.results: list[CheckResult] = []

    async def execute(self, context: VerificationContext) -> list[CheckResult]:
        self.results = []
        await self.run(context)
        return list(self.results)

    @abstractmethod
    async def run(self, context: VerificationContext) -> None:
        raise NotImplementedError

    def _log_execution(self, action: str) -> None:
        self.logger.info("[%s] %s", self.name, action)

    def _record(
        self,
        check: str,
        passed: bool,
        measured: float | None = None,
        expected: float | None = None,
        tolerance: float | None = None,
        seed: int | None = None,
        message: str = "",
    ) -> CheckResult:
        result = CheckResult(
            suite=self.name,
            name=check,
            passed=bool(passed),
            measured=_finite_or_none(measured),
            expected=_finite_or_none(expected),
            tolerance=tolerance,
            seed=seed,
            message=message,
        )
        self.results.append(result)
        self.logger.info(
            "[%s] %s %s measured=%s expected=%s",
            self.name,
            check,
            "PASS" if result.passed else "FAIL",
            measured,
            expected,
        )
        return result

    def _close(self, check: str, measured: float, expected: float, tol: float, *, relative: bool = False) -> CheckResult:
        scale = max(abs(expected), 1e-300) if relative else 1.0
        error = abs(measured - expected) / scale
        kind = "relative" if relative else "absolute"
        return self._record(check, error <= tol, measured, expected, tol, message=f"{kind} error {error:.3e}")

    def _below(self, check: str, measured: float, bound: float, seed: int | None = None) -> CheckResult:
        return self._record(check, measured < bound, measured, None, bound, seed, message=f"bound {bound:g}")

    def _within_se(
        self, check: str, estimate: McEstimate, expected: float, seed: int, n_se: float = 4.0
    ) -> CheckResult:
        z = estimate.z_score(expected)
        return self._record(
            check,
            estimate.within(expected, n_se),
            estimate.value,
            expected,
            n_se * estimate.stderr,
            seed,
            message=f"z={z:.2f} stderr={estimate.stderr:.3e} reps={estimate.reps}",
        )

    def _guard(self, check: str, action: Callable[[], Any]) -> Any:
        """Run one oracle; a library error becomes a failed check instead of aborting the suite."""
        try:
            return action()
        except GcpLabError as exc:
            self._record(check, False, message=f"{type(exc).__name__}: {exc}")
            return None

    async def _guard_async(self, check: str, action: Callable[[], Any]) -> Any:
        try:
            return await action()
        except GcpLabError as exc:
            self._record(check, False, message=f"{type(exc).__name__}: {exc}")
            return None

    def _normalization_checks(self, context: VerificationContext, model: FamilyModel, label: str) -> None:
        tol = context.tolerance("normalization", NORMALIZATION_TOL)
        for t in NORMALIZATION_TIMES:
            check = f"normalization[{label},t={t}]"
            report = self._guard(check, lambda: normalization_report(model, t))
            if report is not None:
                self._record(
                    check,
                    report.error <= tol,
                    report.total,
                    report.expected_mass,
                    tol,
                    message=f"N={report.truncation} tail={report.tail_mass:.3e}",
                )

    def _ode_checks(
        self,
        context: VerificationContext,
        label: str,
        residual: Callable[[int, float], float],
        scale: Callable[[int], float],
        orders: range,
    ) -> None:
        """Relative central-difference residuals at h, plus the O(h^2) decay from 4h to 2h."""
        tol = context.tolerance("ode", ODE_TOL)
        for n in orders:
            check = f"{label}_ode[n={n}]"
            size = self._guard(check, lambda: max(abs(scale(n)), 1e-300))
            if size is None:
                continue
            self._guard(check, lambda: self._below(check, abs(residual(n, ODE_STEP)) / size, tol))
            coarse = abs(residual(n, 4.0 * ODE_STEP)) / size
            fine = abs(residual(n, 2.0 * ODE_STEP)) / size
            # below 1e-9 the residual is rounding noise and carries no order information
            if coarse > 1e-9:
                ratio = coarse / max(fine, 1e-300)
                self._record(
                    f"{label}_ode_order[n={n}]",
                    2.5 <= ratio <= 5.5,
                    ratio,
                    4.0,
                    1.5,
                    message="residual ratio for halved step",
                )

    async def _pmf_distance(
        self,
        context: VerificationContext,
        model: FamilyModel,
        label: str,
        t: float,
        analytic: np.ndarray | None = None,
    ) -> None:
        """Total variation over n <= 30 between the sampled and the analytic pmf."""
        bound = context.tolerance("tv", TV_BOUND)
        counts = await self._mc(context, model.sample_counts(t), context.reps_for(PMF_REPS), f"pmf/{label}")
        exact = analytic if analytic is not None else np.array([model.pmf(n, t) for n in range(TV_N_MAX + 1)])
        distance = total_variation(empirical_pmf(counts, TV_N_MAX), exact)
        self._below(f"pmf_tv[{label}]", distance, bound, context.seed)

    async def _mc(self, context: VerificationContext, sampler: BlockSampler, reps: int, check: str) -> np.ndarray:
        return await context.engine.run(sampler, reps, stream=f"verify/{self.name}/{check}")

    async def _offload(self, action: Callable[[], Any]) -> Any:
        """Library calls that drive the engine synchronously run on a worker thread."""
        return await asyncio.to_thread(action)


def _finite_or_none(value: float | None) -> float | None:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None
