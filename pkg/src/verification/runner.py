from __future__ import annotations

import time
from datetime import datetime, timezone
from typing import Any, Callable

from src.models.experiment import Suite
from src.models.outputs import CheckStatus, VerificationReport
from src.utils.logger import setup_logger
from src.utils.metrics import RuntimeBudget
from src.verification.base_suite import BaseVerificationSuite, VerificationContext
from src.verification.brownian_suite import BrownianSuite
from src.verification.clocks_suite import ClocksSuite
from src.verification.drift_suite import DriftSuite
from src.verification.fracint_suite import FracintSuite
from src.verification.gcp_suite import GcpSuite
from src.verification.routing import resolve_suites
from src.verification.specfun_suite import SpecfunSuite
from src.verification.subordinated_suite import SubordinatedSuite


def default_suites() -> dict[Suite, BaseVerificationSuite]:
    return {
        Suite.SPECFUN: SpecfunSuite(),
        Suite.GCP: GcpSuite(),
        Suite.CLOCKS: ClocksSuite(),
        Suite.BROWNIAN: BrownianSuite(),
        Suite.SUBORDINATED: SubordinatedSuite(),
        Suite.DRIFT: DriftSuite(),
        Suite.FRACINT: FracintSuite(),
    }


class VerificationRunner:
    """
    Runs verification suites in order and collects one report.
    It is the only component that decides which suites run.
    """

    def __init__(
        self,
        suites: dict[Suite, BaseVerificationSuite] | None = None,
        budget_seconds: float = 300.0,
    ) -> None:
        self.suites = suites if suites is not None else default_suites()
        self.budget_seconds = budget_seconds
        self.logger = setup_logger("verification_runner")

    async def run(
        self,
        suite: Suite | str,
        context: VerificationContext,
        progress_callback: Callable[[dict[str, Any]], None] | None = None,
    ) -> VerificationReport:
        selected = resolve_suites(suite)
        report = VerificationReport(status=CheckStatus.PASS, suites=[item.value for item in selected])
        budget = RuntimeBudget(self.budget_seconds)
        budget.start()
        self.logger.info("Starting verification of %s with seed %d", report.suites, context.seed)
        self._emit_event(report, "verify", "started", "Verification started.", "info", progress_callback)

        for item in selected:
            await self._execute_suite(item, context, report, progress_callback)
            if budget.is_breached():
                budget_warning = f"runtime budget of {self.budget_seconds:g}s exceeded"
                if budget_warning not in report.warnings:
                    report.warnings.append(budget_warning)
                    self._emit_event(report, "verify", "budget_warning", budget_warning, "warning", progress_callback)

        report.failed_checks = [f"{check.suite}/{check.name}" for check in report.checks if not check.passed]
        report.status = CheckStatus.FAIL if report.failed_checks else CheckStatus.PASS
        self._emit_event(
            report,
            "verify",
            report.status.value,
            f"Verification finished: {len(report.checks)} checks, {len(report.failed_checks)} failed.",
            "info",
            progress_callback,
        )
        return report

    async def _execute_suite(
        self,
        suite: Suite,
        context: VerificationContext,
        report: VerificationReport,
        progress_callback: Callable[[dict[str, Any]], None] | None,
    ) -> None:
        if suite not in self.suites:
            raise ValueError(f"Unknown suite: {suite.value}")

        self._emit_event(report, suite.value, "in_progress", f"{suite.value} started.", "info", progress_callback)
        started = time.perf_counter()
        try:
            results = await self.suites[suite].execute(context)
        except Exception as exc:
            self._emit_event(report, suite.value, "failed", str(exc), "error", progress_callback)
            self.logger.exception("Suite %s failed: %s", suite.value, exc)
            raise

        elapsed = time.perf_counter() - started
        report.suite_timings[suite.value] = elapsed
        report.checks.extend(results)
        failed = sum(1 for result in results if not result.passed)
        self._emit_event(
            report,
            suite.value,
            "completed",
            f"{suite.value} completed in {elapsed:.2f}s ({len(results)} checks, {failed} failed).",
            "warning" if failed else "info",
            progress_callback,
        )

    def _emit_event(
        self,
        report: VerificationReport,
        step: str,
        status: str,
        message: str,
        level: str,
        progress_callback: Callable[[dict[str, Any]], None] | None = None,
    ) -> None:
        event = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "step": step,
            "status": status,
            "level": level,
            "message": message,
        }
        report.events.append(event)
        if progress_callback:
            progress_callback(event)
