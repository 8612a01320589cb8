from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.errors import DomainError


@dataclass(frozen=True)
class StepPath:
    """Piecewise-constant counting path: value at s is the sum of sizes with epoch <= s."""

    epochs: np.ndarray
    sizes: np.ndarray
    horizon: float

    def __post_init__(self) -> None:
        epochs = np.asarray(self.epochs, dtype=float)
        sizes = np.asarray(self.sizes, dtype=np.int64)
        if epochs.shape != sizes.shape or epochs.ndim != 1:
            raise DomainError("epochs and sizes must be matching 1-d sequences")
        if epochs.size and (np.any(np.diff(epochs) <= 0) or epochs[0] < 0 or epochs[-1] > self.horizon):
            raise DomainError("epochs must be strictly increasing inside [0, horizon]")
        if np.any(sizes < 1):
            raise DomainError("jump sizes must be positive integers")
        object.__setattr__(self, "epochs", epochs)
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def empty(cls, horizon: float) -> StepPath:
        return cls(np.empty(0), np.empty(0, dtype=np.int64), horizon)

    def value_at(self, s: float | np.ndarray) -> np.ndarray | int:
        counts = np.concatenate(([0], np.cumsum(self.sizes)))
        index = np.searchsorted(self.epochs, s, side="right")
        return counts[index]

    def values(self) -> np.ndarray:
        """Path value on each constancy interval, starting with 0 before the first jump."""
        return np.concatenate(([0], np.cumsum(self.sizes)))


@dataclass(frozen=True)
class ClockPath:
    """Non-decreasing clock path sampled on a grid, with value 0 at time 0."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.shape != values.shape or grid.ndim != 1 or grid.size == 0:
            raise DomainError("grid and values must be matching non-empty 1-d arrays")
        if grid[0] != 0 or values[0] != 0:
            raise DomainError("clock paths start at (0, 0)")
        if np.any(np.diff(grid) <= 0) or np.any(np.diff(values) < 0):
            raise DomainError("clock paths are non-decreasing on an increasing grid")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def value_at(self, s: float | np.ndarray) -> float | np.ndarray:
        """Right-continuous step interpolation."""
        index = np.searchsorted(self.grid, s, side="right") - 1
        return self.values[np.maximum(index, 0)]
