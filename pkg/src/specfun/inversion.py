from __future__ import annotations

from typing import Callable

import numpy as np

from src.errors import DomainError

ComplexPgf = Callable[[np.ndarray], np.ndarray]

DEFAULT_POINTS = 4096


def _contour(points: int, radius: float | None) -> tuple[np.ndarray, float]:
    if points < 2:
        raise DomainError("contour inversion needs at least two points")
    # radius**points = 1e-13 bounds the aliasing error of every coefficient
    r = 10.0 ** (-13.0 / points) if radius is None else radius
    if not 0 < r < 1:
        raise DomainError(f"contour radius must lie in (0, 1), got {r}")
    angles = 2.0 * np.pi * np.arange(points) / points
    return r * np.exp(1j * angles), r


def pgf_coefficients(
    pgf: ComplexPgf,
    n_max: int,
    radius: float | None = None,
    points: int = DEFAULT_POINTS,
) -> np.ndarray:
    """Probabilities P{N = n}, n = 0..n_max, from a pgf that accepts complex arrays.

    Cauchy's integral on |u| = radius is discretized with the trapezoid rule,
    which is one FFT over the contour.
    """
    if n_max >= points:
        raise DomainError("n_max must be smaller than the number of contour points")
    nodes, r = _contour(points, radius)
    spectrum = np.fft.fft(pgf(nodes)) / points
    n = np.arange(n_max + 1)
    return spectrum[: n_max + 1].real / r**n


def pgf_cdf(
    pgf: ComplexPgf,
    n: int,
    radius: float | None = None,
    points: int = DEFAULT_POINTS,
) -> float:
    """P{N <= n}, the n-th coefficient of pgf(u) / (1 - u)."""
    return float(pgf_coefficients(lambda u: pgf(u) / (1.0 - u), n, radius, points)[n])
