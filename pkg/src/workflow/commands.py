"""Command implementations behind the CLI subcommands.

Every command takes a validated ExperimentConfig and an optional engine and
returns a CommandTable. Analytic columns never depend on the engine; MC
columns are filled only when an engine is given and reps > 0, and always
come with their standard error.
"""

from __future__ import annotations

import asyncio
import math
from typing import Any, Awaitable, Callable

import numpy as np

from src.config.settings import get_settings
from src.errors import DomainError, JetOrderError
from src.models.experiment import ExperimentConfig, Family, TransformKind
from src.models.outputs import CommandTable, McEstimate
from src.models.params import GcpParams
from src.montecarlo.engine import MonteCarloEngine
from src.montecarlo.estimators import (
    covariance_estimate,
    laplace_estimate,
    mean_estimate,
    pgf_estimate,
    survival_counts,
    survival_slope,
    variance_estimate,
)
from src.montecarlo.rng import substream
from src.processes.fracint import (
    fracint_gcp_moments,
    fracint_gfcp_mean,
    fracint_gfcp_variance,
    gfcp_step_path,
    rl_integral_step,
    sample_gcp_rl_integrals,
)
from src.processes.gcp_core import simulate_gcp
from src.utils.logger import setup_logger
from src.verification.base_suite import VerificationContext
from src.verification.runner import VerificationRunner
from src.workflow.families import build_family

Command = Callable[[ExperimentConfig, "MonteCarloEngine | None"], Awaitable[CommandTable]]

DEFAULT_TAIL_REPS = 1_000_000
PATH_FAMILIES = (Family.GCP, Family.GFCP)

logger = setup_logger("workflow.commands")


def _table(command: str, columns: list[str], engine: MonteCarloEngine | None, reps: int) -> CommandTable:
    return CommandTable(
        command=command,
        columns=columns,
        seed=engine.seed if engine is not None else None,
        reps=reps if engine is not None else 0,
    )


def _mc_columns(estimate: McEstimate | None) -> dict[str, Any]:
    if estimate is None:
        return {"mc": None, "mc_stderr": None}
    return {"mc": estimate.value, "mc_stderr": estimate.stderr}


def _mc_enabled(config: ExperimentConfig, engine: MonteCarloEngine | None) -> bool:
    return engine is not None and config.reps > 0


def _grid_step(config: ExperimentConfig) -> float:
    return config.grid_step or get_settings().grid_step


async def cmd_pmf(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """pmf(n, t) for n = 0..n_max at the first time of the grid."""
    model = build_family(config)
    if model.max_n is not None and config.n_max > model.max_n:
        raise JetOrderError(f"{config.family.value} pmf is available up to n={model.max_n}, asked for {config.n_max}")
    t = config.t_grid[0]
    table = _table("pmf", ["n", "analytic", "mc", "mc_stderr"], engine, config.reps)

    counts = None
    if _mc_enabled(config, engine):
        counts = await engine.run(model.sample_counts(t), config.reps, f"pmf/{config.family.value}")

    for n in range(config.n_max + 1):
        estimate = mean_estimate((counts == n).astype(float)) if counts is not None else None
        table.rows.append({"n": n, "analytic": model.pmf(n, t), **_mc_columns(estimate)})
    return table


async def cmd_moments(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """Mean and variance at each t, the covariance with M(s) when s is set, and E M(M-1) where known."""
    model = build_family(config)
    table = _table("moments", ["t", "quantity", "analytic", "mc", "mc_stderr"], engine, config.reps)
    mc = _mc_enabled(config, engine)

    for t in config.t_grid:
        record = model.moments_at(t, config.s)
        values = pairs = None
        if mc:
            stream = f"moments/{config.family.value}/{t}"
            if config.s is not None and model.joint_sampler is not None:
                pairs = await engine.run(model.joint_sampler(config.s, t), config.reps, stream)
                values = pairs[:, 1]
            else:
                values = await engine.run(model.sample_values(t), config.reps, stream)

        quantities: list[tuple[str, float | None, Callable[[], McEstimate] | None]] = [
            ("mean", record.mean, (lambda: mean_estimate(values)) if values is not None else None),
            ("var", record.var, (lambda: variance_estimate(values)) if values is not None else None),
        ]
        if record.cov is not None:
            estimator = (lambda: covariance_estimate(pairs[:, 0], pairs[:, 1])) if pairs is not None else None
            quantities.append(("cov", record.cov, estimator))
        if record.factorial_moment2 is not None:

            def factorial() -> McEstimate:
                counts = np.asarray(values, dtype=float) - model.offset(t)
                return mean_estimate(counts * (counts - 1.0))

            quantities.append(("factorial_moment2", record.factorial_moment2, factorial if values is not None else None))

        for name, analytic, estimator in quantities:
            estimate = estimator() if estimator is not None else None
            table.rows.append({"t": t, "quantity": name, "analytic": analytic, **_mc_columns(estimate)})
    return table


async def cmd_transform(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """pgf E u^M(t) or Laplace transform E exp(-s M(t)) over config.args."""
    model = build_family(config)
    t = config.t_grid[0]
    table = _table("transform", ["arg", "analytic", "mc", "mc_stderr"], engine, config.reps)
    pgf = config.transform == TransformKind.PGF

    samples = None
    if _mc_enabled(config, engine):
        sampler = model.sample_counts(t) if pgf else model.sample_values(t)
        samples = await engine.run(sampler, config.reps, f"transform/{config.transform.value}/{config.family.value}")

    for arg in config.args:
        if pgf:
            analytic = model.pgf_at(arg, t)
            estimate = pgf_estimate(samples, arg) if samples is not None else None
        else:
            analytic = model.laplace(arg, t)
            estimate = laplace_estimate(samples, arg) if samples is not None else None
        table.rows.append({"arg": arg, "analytic": analytic, **_mc_columns(estimate)})
    return table


async def cmd_simulate(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """Jump epochs and sizes of config.reps paths (one when reps is 0) up to the last grid time."""
    if config.family not in PATH_FAMILIES:
        raise DomainError(f"simulate supports gcp and gfcp, got {config.family.value}")
    if engine is None:
        raise DomainError("simulate needs a seed")
    p = GcpParams(rates=tuple(config.rates))
    horizon = max(config.t_grid)
    paths = config.reps or 1
    step = _grid_step(config)
    table = CommandTable(command="simulate", columns=["path", "epoch", "size"], seed=engine.seed, reps=paths)

    def draw(index: int):
        rng = substream(engine.seed, "simulate", index)
        if config.family == Family.GFCP:
            return gfcp_step_path(p, config.beta, horizon, step, rng)
        return simulate_gcp(p, horizon, rng)

    for index in range(paths):
        path = await asyncio.to_thread(draw, index)
        for epoch, size in zip(path.epochs.tolist(), path.sizes.tolist()):
            table.rows.append({"path": index, "epoch": epoch, "size": size})
    return table


async def cmd_lrd(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """Corr(M(s), M(t)) * sqrt(t / s) at every t of the grid; values near 1 for large t mean d = 1/2."""
    model = build_family(config)
    s = config.s if config.s is not None else 1.0
    at_s = model.moments_at(s, s)
    table = CommandTable(command="lrd", columns=["t", "corr_ratio"])
    for t in config.t_grid:
        record = model.moments_at(t, s)
        if record.cov is None:
            raise DomainError(f"{config.family.value} has no covariance formula")
        corr = record.cov / math.sqrt(at_s.var * record.var)
        table.rows.append({"t": t, "corr_ratio": corr * math.sqrt(t / s)})
    return table


async def cmd_tails(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """Empirical log P{M(t) > y} over y_grid, with the least-squares slope against log y."""
    if engine is None:
        raise DomainError("tails needs a seed")
    model = build_family(config)
    t = config.t_grid[0]
    reps = config.reps or DEFAULT_TAIL_REPS
    values = await engine.run(model.sample_values(t), reps, f"tails/{config.family.value}/{t}")
    slope, log_survival = survival_slope(values, config.y_grid)
    counts = survival_counts(values, config.y_grid)

    table = CommandTable(
        command="tails",
        columns=["y", "log_survival", "log_survival_stderr", "slope"],
        seed=engine.seed,
        reps=reps,
    )
    for y, log_value, count in zip(config.y_grid, log_survival.tolist(), counts.tolist()):
        prob = count / reps
        # delta method on log of a binomial proportion; undefined with no exceedances
        stderr = math.sqrt((1.0 - prob) / (reps * prob)) if count else None
        table.rows.append({"y": y, "log_survival": log_value, "log_survival_stderr": stderr, "slope": slope})
    return table


async def cmd_fracint(config: ExperimentConfig, engine: MonteCarloEngine | None = None) -> CommandTable:
    """Mean and variance of the Riemann-Liouville integral of a GCP or GFCP path over a_grid x t_grid."""
    if config.family not in PATH_FAMILIES:
        raise DomainError(f"fracint supports gcp and gfcp, got {config.family.value}")
    p = GcpParams(rates=tuple(config.rates))
    gfcp = config.family == Family.GFCP
    step = _grid_step(config)
    table = _table("fracint", ["a", "t", "quantity", "analytic", "mc", "mc_stderr"], engine, config.reps)
    mc = _mc_enabled(config, engine)

    for a in config.a_grid:
        for t in config.t_grid:
            if gfcp:
                mean = fracint_gfcp_mean(p, a, config.beta, t)
                var = fracint_gfcp_variance(p, a, config.beta, t)
            else:
                expected = fracint_gcp_moments(p, a, t)
                mean, var = expected.mean, expected.var

            values = None
            if mc:
                if gfcp:

                    def block(rng: np.random.Generator, size: int, a: float = a, t: float = t) -> np.ndarray:
                        return np.array(
                            [rl_integral_step(gfcp_step_path(p, config.beta, t, step, rng), a, t) for _ in range(size)]
                        )

                else:

                    def block(rng: np.random.Generator, size: int, a: float = a, t: float = t) -> np.ndarray:
                        return sample_gcp_rl_integrals(p, a, t, rng, size)[:, 0]

                values = await engine.run(block, config.reps, f"fracint/{config.family.value}/{a}/{t}")

            table.rows.append(
                {
                    "a": a,
                    "t": t,
                    "quantity": "mean",
                    "analytic": mean,
                    **_mc_columns(mean_estimate(values) if values is not None else None),
                }
            )
            table.rows.append(
                {
                    "a": a,
                    "t": t,
                    "quantity": "var",
                    "analytic": var,
                    **_mc_columns(variance_estimate(values) if values is not None else None),
                }
            )
    return table


async def cmd_verify(
    config: ExperimentConfig,
    engine: MonteCarloEngine | None = None,
    runner: VerificationRunner | None = None,
) -> CommandTable:
    """One row per check of the selected suites; the report is attached for the exit code."""
    if engine is None:
        raise DomainError("verify needs a seed")
    runner = runner or VerificationRunner(budget_seconds=get_settings().runtime_budget_seconds)
    context = VerificationContext(
        seed=engine.seed,
        engine=engine,
        reps=config.reps or None,
        tolerances=dict(config.tolerances),
        grid_step=_grid_step(config),
    )
    report = await runner.run(config.suite, context)
    table = CommandTable(
        command="verify",
        columns=["suite", "check", "passed", "measured", "expected", "tolerance", "seed", "message"],
        seed=engine.seed,
        reps=config.reps,
        report=report,
    )
    for check in report.checks:
        table.rows.append(
            {
                "suite": check.suite,
                "check": check.name,
                "passed": check.passed,
                "measured": check.measured,
                "expected": check.expected,
                "tolerance": check.tolerance,
                "seed": check.seed,
                "message": check.message,
            }
        )
    logger.info("verify %s: %s (%d checks)", config.suite.value, report.status.value, len(report.checks))
    return table


COMMANDS: dict[str, Command] = {
    "pmf": cmd_pmf,
    "moments": cmd_moments,
    "transform": cmd_transform,
    "simulate": cmd_simulate,
    "lrd": cmd_lrd,
    "tails": cmd_tails,
    "fracint": cmd_fracint,
    "verify": cmd_verify,
}
