from __future__ import annotations

from src.models.experiment import Suite

# order of "all": cheap deterministic oracles first, long Monte Carlo suites last
SUITE_ORDER = (
    Suite.SPECFUN,
    Suite.GCP,
    Suite.CLOCKS,
    Suite.BROWNIAN,
    Suite.SUBORDINATED,
    Suite.DRIFT,
    Suite.FRACINT,
)


def resolve_suites(suite: Suite | str) -> list[Suite]:
    suite = Suite(suite)
    if suite == Suite.ALL:
        return list(SUITE_ORDER)
    return [suite]
