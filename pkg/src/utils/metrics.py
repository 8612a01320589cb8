from __future__ import annotations

import time


class RuntimeBudget:
    """Wall-clock budget for a verification suite or a long MC command."""

    def __init__(self, target_seconds: float) -> None:
        self.target_seconds = target_seconds
        self.started_at: float | None = None

    def start(self) -> None:
        self.started_at = time.perf_counter()

    def elapsed_seconds(self) -> float:
        if self.started_at is None:
            return 0.0
        return time.perf_counter() - self.started_at

    def is_breached(self) -> bool:
        return self.elapsed_seconds() > self.target_seconds
