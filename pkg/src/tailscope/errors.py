"""Exception types raised across the library."""


class TailscopeError(Exception):
    """Base class for every error raised by this package."""


class MissingColumnError(TailscopeError):
    """Input CSV lacks a required header column."""


class UnparsableRowError(TailscopeError):
    """A CSV row could not be parsed; the message names the row."""


class NonPositivePriceError(TailscopeError):
    """A close price was zero or negative; the message names the date."""


class DuplicateDateError(TailscopeError):
    """Two observations share the same date."""


class EmptySeriesError(TailscopeError):
    """Operation requires a non-empty series."""


class TooShortError(TailscopeError):
    """Series is shorter than the operation's minimum length."""


class WindowTooSmallError(TailscopeError):
    """Rolling window is below the statistic's minimum size."""


class WindowTooLargeError(TailscopeError):
    """Rolling window exceeds the series length."""


class ZeroToleranceError(TailscopeError):
    """Relative tolerance resolved to zero (constant window)."""


class NegativeValueError(TailscopeError):
    """Input values must be non-negative."""


class TooFewPointsError(TailscopeError):
    """Curve has too few points to work with."""


class AllZeroError(TailscopeError):
    """Input values are all zero."""


class InvalidParameterError(TailscopeError):
    """A parameter value is outside its valid domain."""
