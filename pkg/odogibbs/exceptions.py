from __future__ import annotations


class OdogibbsError(Exception):
    """Base class of every error raised by the library."""


class InsufficientDepth(OdogibbsError, ValueError):
    """
    Raised when a residue does not carry enough bits to answer a query exactly.

    Attributes
    ----------
    depth:
        The depth that was available.
    needed:
        The smallest depth that answers the query.
    """

    def __init__(self, message: str, depth: int = 0, needed: int = 0) -> None:
        super().__init__(message)
        self.depth: int = depth
        self.needed: int = needed


class RangeExceeded(OdogibbsError, ArithmeticError):
    """
    Raised when a floating enclosure leaves the binary64 range.

    Attributes
    ----------
    direction:
        ``"up"`` for overflow, ``"down"`` for a value below the domain of the operation.
    """

    def __init__(self, message: str, direction: str) -> None:
        super().__init__(message)
        self.direction: str = direction


class ScanLimitExceeded(OdogibbsError, RuntimeError):
    """Raised when lazy bit materialization passes the configured scan limit."""

    def __init__(self, message: str, limit: int = 0) -> None:
        super().__init__(message)
        self.limit: int = limit


class InsufficientWindow(OdogibbsError, ValueError):
    pass


class WordLengthOverflow(OdogibbsError, ValueError):
    pass


class CostGuard(OdogibbsError, RuntimeError):
    pass


class OutOfScope(OdogibbsError, ValueError):
    pass


class UsageError(OdogibbsError):
    """Bad command line or config file input. The CLI maps it to exit status 2."""
