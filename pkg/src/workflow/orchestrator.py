from __future__ import annotations

import asyncio
import time
from typing import Any, Callable

from pydantic import BaseModel, Field

from src.config.settings import get_settings
from src.models.experiment import ExperimentConfig
from src.models.outputs import CheckStatus, CommandTable
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.rng import resolve_seed
from src.utils.logger import setup_logger
from src.utils.metrics import RuntimeBudget
from src.workflow.commands import COMMANDS

# commands that always sample, whatever reps says
SAMPLING_COMMANDS = ("simulate", "tails", "verify")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3


class CommandOutcome(BaseModel):
    table: CommandTable
    exit_code: int = EXIT_OK
    elapsed_seconds: float = 0.0
    warnings: list[str] = Field(default_factory=list)


class ExperimentOrchestrator:
    """Resolves the seed, builds the MC engine and dispatches one command."""

    def __init__(self) -> None:
        self.settings = get_settings()
        self.logger = setup_logger("orchestrator")

    def needs_engine(self, command: str, config: ExperimentConfig) -> bool:
        return command in SAMPLING_COMMANDS or config.reps > 0

    def build_engine(self, command: str, config: ExperimentConfig) -> MonteCarloEngine | None:
        if not self.needs_engine(command, config):
            return None
        return MonteCarloEngine(resolve_seed(config.seed), workers=config.workers)

    async def execute(
        self,
        command: str,
        config: ExperimentConfig,
        progress_callback: Callable[[dict[str, Any]], None] | None = None,
    ) -> CommandOutcome:
        if command not in COMMANDS:
            raise ValueError(f"Unknown command: {command}")
        engine = self.build_engine(command, config)
        budget = RuntimeBudget(self.settings.runtime_budget_seconds)
        budget.start()
        self.logger.info(
            "Running %s for %s (reps=%d, seed=%s)",
            command,
            config.family.value,
            config.reps,
            engine.seed if engine is not None else "-",
        )

        started = time.perf_counter()
        table = await COMMANDS[command](config, engine)
        outcome = CommandOutcome(table=table, elapsed_seconds=time.perf_counter() - started)

        if table.report is not None:
            outcome.warnings.extend(table.report.warnings)
            if table.report.status == CheckStatus.FAIL:
                outcome.exit_code = EXIT_CHECK_FAILED
                self.logger.warning("%d checks failed: %s", len(table.report.failed_checks), table.report.failed_checks)
        if budget.is_breached():
            outcome.warnings.append(f"{command} exceeded the runtime budget of {budget.target_seconds:g}s")
        for warning in outcome.warnings:
            self.logger.warning(warning)
        if progress_callback:
            progress_callback({"step": command, "status": "completed", "elapsed_seconds": outcome.elapsed_seconds})
        return outcome

    def execute_sync(
        self,
        command: str,
        config: ExperimentConfig,
        progress_callback: Callable[[dict[str, Any]], None] | None = None,
    ) -> CommandOutcome:
        return asyncio.run(self.execute(command, config, progress_callback=progress_callback))
