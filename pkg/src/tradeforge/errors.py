"""Exception types raised across the package."""


class TradeError(ValueError):
    """Base class for all domain errors."""


class InvalidParameter(TradeError):
    pass


class InconsistentTrade(TradeError):
    """The trade fails the [0]-trade balance condition."""


class UndefinedOnVoid(TradeError):
    pass


class UndefinedOnEmpty(TradeError):
    pass


class InvalidMinimalForm(TradeError):
    pass


class SpanTooLarge(TradeError):
    pass


class UniverseTooLarge(TradeError):
    pass


class ClassificationFailure(TradeError):
    """Volume and affine rank match none of the recognised forms."""


class MergePreconditionViolated(TradeError):
    pass


class InvalidTemplate(TradeError):
    pass


class InvalidComparison(TradeError):
    pass


class EnumerationAborted(RuntimeError):
    """Raised when a labeled-trade budget is exhausted."""

    def __init__(self, message, partial=False):
        super().__init__(message)
        self.partial = partial


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search ran out of nodes before deciding."""
