"""Exception hierarchy shared by every module."""

from __future__ import annotations


class EconomyError(ValueError):
    """Base class for domain errors raised by this package."""


class InvalidEconomyError(EconomyError):
    """An economy description violates a structural invariant."""


class NotViableError(EconomyError):
    """Some commodity is produced in insufficient quantity for its consumers."""


class ConvergenceError(EconomyError):
    """The iterative eigensolver did not converge within ``max_iter`` steps."""


class SingularSystemError(EconomyError):
    """A linear system that must be solved is singular or numerically so."""


class NonBasicInfeasibleError(EconomyError):
    """A non-basic sector cannot cover the profit rate fixed by the basic block.

    Raised when the back-solve denominator is not positive: even an unbounded
    price would leave revenue short of the required profit.
    """

    def __init__(self, sectors: list[str], message: str | None = None) -> None:
        self.sectors = list(sectors)
        super().__init__(message or f"non-basic infeasible: {', '.join(self.sectors)}")


class ProfitRateError(EconomyError):
    """Requested profit rate lies outside ``[0, R]``."""
