from __future__ import annotations
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from typing_extensions import Self


class DepthSchedule:
    """
    Geometric schedule of residue depths for lazy bit materialization.

    Iterating yields ``initial``, then multiplies the depth by ``multiplier`` until ``limit`` is
    yielded once; the next step stops the iteration.

    Parameters
    ----------
    initial:
        The first depth.
    multiplier:
        Factor applied to the depth at every step.
    limit:
        The deepest depth the schedule ever yields.

    Attributes
    ----------
    current: :class:`int`
        The depth yielded last, 0 before the first step.
    """

    __slots__ = ("current", "_multiplier", "_limit", "_initial", "_steps")

    def __init__(self, initial: int, multiplier: int, limit: int) -> None:
        if initial <= 0 or multiplier < 2:
            raise ValueError("A depth schedule needs a positive start and a multiplier of at least 2.")

        self.current: int = 0

        self._multiplier: int = multiplier
        self._limit: int = max(limit, 1)
        self._steps: int = 0

        self._initial: int = min(initial, self._limit)

    def __repr__(self) -> str:
        return f"<DepthSchedule(current={self.current}, next={self.next}, limit={self._limit})>"

    def __iter__(self) -> Self:
        return self

    def __next__(self) -> int:
        if not self.current:
            self.current = self._initial
        elif self.exhausted:
            raise StopIteration
        else:
            self.current = self.next

        self._steps += 1
        return self.current

    @property
    def next(self) -> int:
        """Next depth of the schedule."""
        if not self.current:
            return self._initial
        return min(self._limit, self.current * self._multiplier)

    @property
    def limit(self) -> int:
        """The deepest depth of the schedule."""
        return self._limit

    @property
    def steps(self) -> int:
        """Number of depths yielded since the last reset."""
        return self._steps

    @property
    def exhausted(self) -> bool:
        """True once the limit was yielded."""
        return self.current >= self._limit

    def reset(self) -> None:
        """Method to restart the schedule from the initial depth."""
        self.current = 0
        self._steps = 0
