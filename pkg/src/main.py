from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from pydantic import ValidationError

from src.errors import ConfigError, DomainError, NumericalError
from src.models.experiment import ExperimentConfig, OutputFormat, Suite
from src.workflow.commands import COMMANDS
from src.workflow.orchestrator import EXIT_NUMERIC, EXIT_VALIDATION, ExperimentOrchestrator
from src.workflow.output import error_payload, render, write_output


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Generalized counting process laboratory")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("suite", nargs="?", default=None, choices=[suite.value for suite in Suite])
    parser.add_argument("--config", type=str, default=None, help="JSON experiment config")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--reps", type=int, default=None)
    parser.add_argument("--format", type=str, default=None, choices=[fmt.value for fmt in OutputFormat])
    parser.add_argument("--out", type=str, default=None)
    parser.add_argument("--workers", type=int, default=None)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """File values first, then flags; unknown keys fail validation."""
    values: dict[str, Any] = {}
    if args.config:
        try:
            values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(values, dict):
            raise ConfigError("the config file must hold a JSON object")
    overrides = {
        "seed": args.seed,
        "reps": args.reps,
        "format": args.format,
        "workers": args.workers,
        "suite": args.suite,
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    return ExperimentConfig.model_validate(values)


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        outcome = ExperimentOrchestrator().execute_sync(args.command, config)
        write_output(render(outcome.table, config.format), args.out)
        return outcome.exit_code
    except (ValidationError, DomainError) as exc:
        print(error_payload(exc))
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(error_payload(exc))
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
