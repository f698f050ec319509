from __future__ import annotations
from typing import Any, Generic, Optional, TypeVar

T = TypeVar("T")


class Result(Generic[T]):
    """
    Represents the outcome of a fallible per-sample computation.

    Parameters
    ----------
    value:
        Computed value, None on failure.
    error:
        Error message detailing why the computation failed.

    Attributes
    ----------
    value:
        Computation result. None if the computation failed.
    error:
        Error message detailing why the computation failed, None on success.
    """

    __slots__ = ("value", "error")

    def __init__(self, value: Optional[T], error: Optional[str] = None) -> None:
        self.value: Optional[T] = value if error is None else None
        self.error: Optional[str] = error

    def __hash__(self) -> int:
        return hash((repr(self.value), self.error))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Result):
            return NotImplemented
        return self.value == other.value and self.error == other.error

    def __ne__(self, other: Any) -> bool:
        return not self.__eq__(other)

    def __bool__(self) -> bool:
        return self.success

    def __repr__(self) -> str:
        return f"<Result(success={self.success})>"

    @property
    def success(self) -> bool:
        """True if the computation was successful."""
        return self.error is None

    @property
    def failure(self) -> bool:
        """True if the computation failed."""
        return self.error is not None

    @classmethod
    def fail(cls, error: str) -> Result[Any]:
        """Create a Result object for a failed computation."""
        return cls(value=None, error=error)

    @classmethod
    def ok(cls, value: T) -> Result[T]:
        """Create a Result object for a successful computation."""
        return cls(value=value)

    def unwrap(self) -> T:
        """
        Returns the value.

        Raises
        ------
        RuntimeError
            The computation failed.
        """
        if self.error is not None:
            raise RuntimeError(self.error)
        return self.value  # type: ignore
