from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from src.errors import DomainError


class TaylorJet:
    """Truncated Taylor expansion f(center + h) = sum_r coeffs[r] h^r, r <= order.

    Coefficients are derivatives divided by factorials. All arithmetic is exact
    truncated-series arithmetic, so derivatives of composite expressions up to
    `order` come out without any finite-difference error.
    """

    __slots__ = ("center", "coeffs")

    def __init__(self, center: float, coeffs: Sequence[float] | np.ndarray) -> None:
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("a jet needs at least the value coefficient")
        self.center = float(center)
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    @classmethod
    def variable(cls, center: float, order: int, direction: float = 1.0) -> TaylorJet:
        """The identity x = center + direction * h."""
        coeffs = np.zeros(order + 1)
        coeffs[0] = center
        if order >= 1:
            coeffs[1] = direction
        return cls(center, coeffs)

    @classmethod
    def constant(cls, center: float, order: int, value: float) -> TaylorJet:
        coeffs = np.zeros(order + 1)
        coeffs[0] = value
        return cls(center, coeffs)

    def derivatives(self) -> np.ndarray:
        factorials = np.array([math.factorial(r) for r in range(self.order + 1)], dtype=float)
        return self.coeffs * factorials

    def _coerce(self, other: TaylorJet | float) -> TaylorJet:
        if isinstance(other, TaylorJet):
            if other.order != self.order:
                raise DomainError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        return TaylorJet.constant(self.center, self.order, float(other))

    def __add__(self, other: TaylorJet | float) -> TaylorJet:
        other = self._coerce(other)
        return TaylorJet(self.center, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self) -> TaylorJet:
        return TaylorJet(self.center, -self.coeffs)

    def __sub__(self, other: TaylorJet | float) -> TaylorJet:
        return self + (-self._coerce(other))

    def __rsub__(self, other: float) -> TaylorJet:
        return self._coerce(other) - self

    def __mul__(self, other: TaylorJet | float) -> TaylorJet:
        if not isinstance(other, TaylorJet):
            return TaylorJet(self.center, self.coeffs * float(other))
        other = self._coerce(other)
        return TaylorJet(self.center, np.convolve(self.coeffs, other.coeffs)[: self.order + 1])

    __rmul__ = __mul__

    def __truediv__(self, other: TaylorJet | float) -> TaylorJet:
        if not isinstance(other, TaylorJet):
            return TaylorJet(self.center, self.coeffs / float(other))
        other = self._coerce(other)
        b = other.coeffs
        if b[0] == 0:
            raise DomainError("division by a jet with zero value")
        q = np.zeros_like(self.coeffs)
        for n in range(self.order + 1):
            q[n] = (self.coeffs[n] - np.dot(b[1 : n + 1], q[n - 1 :: -1][:n])) / b[0]
        return TaylorJet(self.center, q)

    def __rtruediv__(self, other: float) -> TaylorJet:
        return self._coerce(other) / self

    def __pow__(self, exponent: float) -> TaylorJet:
        return self.power(exponent)

    def exp(self) -> TaylorJet:
        a = self.coeffs
        y = np.zeros_like(a)
        y[0] = math.exp(a[0])
        k = np.arange(1, self.order + 1)
        for n in range(1, self.order + 1):
            y[n] = np.dot(k[:n] * a[1 : n + 1], y[n - 1 :: -1][:n]) / n
        return TaylorJet(self.center, y)

    def log(self) -> TaylorJet:
        x = self.coeffs
        if x[0] <= 0:
            raise DomainError("log of a jet needs a positive value")
        y = np.zeros_like(x)
        y[0] = math.log(x[0])
        for n in range(1, self.order + 1):
            k = np.arange(1, n)
            y[n] = (x[n] - np.dot(k * y[1:n], x[n - 1 : 0 : -1]) / n) / x[0]
        return TaylorJet(self.center, y)

    def power(self, exponent: float) -> TaylorJet:
        x = self.coeffs
        if x[0] <= 0:
            raise DomainError("real powers of a jet need a positive value")
        y = np.zeros_like(x)
        y[0] = x[0] ** exponent
        for n in range(1, self.order + 1):
            k = np.arange(1, n + 1)
            weights = exponent * k - (n - k)
            y[n] = np.dot(weights * x[1 : n + 1], y[n - 1 :: -1][:n]) / (n * x[0])
        return TaylorJet(self.center, y)

    def integrate(self, constant: float) -> TaylorJet:
        """Antiderivative in h with the given value at h = 0, same order."""
        coeffs = np.zeros_like(self.coeffs)
        coeffs[0] = constant
        r = np.arange(1, self.order + 1)
        coeffs[1:] = self.coeffs[:-1] / r
        return TaylorJet(self.center, coeffs)

    def compose(self, outer: Sequence[float] | np.ndarray) -> TaylorJet:
        """F(self) for F given by its Taylor coefficients at self.value."""
        outer = np.asarray(outer, dtype=float)
        if outer.size < self.order + 1:
            raise DomainError("outer series is shorter than the jet order")
        shift = self - self.value
        result = TaylorJet.constant(self.center, self.order, outer[self.order])
        for r in range(self.order - 1, -1, -1):
            result = result * shift + outer[r]
        return result

    def __repr__(self) -> str:
        return f"TaylorJet(center={self.center!r}, order={self.order})"
