from __future__ import annotations


class GcpLabError(Exception):
    """Root of every error raised by the library."""


class DomainError(GcpLabError, ValueError):
    """An argument lies outside the domain of the formula or sampler."""


class PoleError(DomainError):
    pass


class OrderError(DomainError):
    """Time arguments out of order, e.g. s > t in a covariance."""


class ConfigError(DomainError):
    pass


class InfiniteMomentError(DomainError):
    """The requested moment does not exist for these parameters."""


class ConditioningError(DomainError):
    """Conditioning on an event of probability zero."""


class NumericalError(GcpLabError, ArithmeticError):
    """A computation could not reach its documented accuracy."""


class ConvergenceError(NumericalError):
    pass


class CapExceededError(NumericalError):
    def __init__(self, message: str, count: int) -> None:
        super().__init__(message)
        self.count = count


class JetOrderError(NumericalError):
    pass


class RejectionCapError(NumericalError):
    pass


class HorizonExceededError(NumericalError):
    pass


class InsufficientSamplesError(NumericalError):
    def __init__(self, message: str, counts: list[int]) -> None:
        super().__init__(message)
        self.counts = counts


class QuadratureError(NumericalError):
    pass


VALIDATION_ERRORS = (DomainError,)
NUMERIC_ERRORS = (NumericalError,)
