from __future__ import annotations

import math
import logging

from threading import Lock
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from .enums import Errors, Tail
from .exceptions import InsufficientDepth, ScanLimitExceeded

# Default number of bits a lazy scan may materialize before giving up.
SCAN_LIMIT: int = 1 << 16

Valuation = Union[int, float]


class Residue:
    """
    A depth ``K`` truncation of an odometer point, the integer ``DN_K`` together with ``K``.

    Bit ``i`` of ``value`` is the coordinate ``x_i``.

    Parameters
    ----------
    depth:
        The number of known bits, at least 1.
    value:
        The integer ``DN_depth``, ``0 <= value < 2**depth``.
    """

    __slots__ = ("_depth", "_value")

    def __init__(self, depth: int, value: int) -> None:
        if depth < 1:
            raise ValueError("Residue depth must be positive.")
        if not 0 <= value < (1 << depth):
            raise ValueError(f"Residue value {value} does not fit in {depth} bits.")

        self._depth: int = depth
        self._value: int = value

    def __repr__(self) -> str:
        return f"<Residue(depth={self._depth}, value={self._value})>"

    def __hash__(self) -> int:
        return hash((self._depth, self._value))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Residue):
            return NotImplemented
        return self._depth == other._depth and self._value == other._value

    @property
    def depth(self) -> int:
        """Number of known bits."""
        return self._depth

    @property
    def value(self) -> int:
        """The integer formed by the known bits, low bit first."""
        return self._value

    def bit(self, index: int) -> int:
        if not 0 <= index < self._depth:
            raise InsufficientDepth(Errors.insufficient_depth(self._depth, index + 1), self._depth, index + 1)
        return (self._value >> index) & 1

    def dn(self, k: int) -> int:
        """
        ``DN_k``, the integer formed by the first ``k`` bits.

        Raises
        ------
        InsufficientDepth
            ``k`` exceeds the residue depth.
        """
        if k > self._depth:
            raise InsufficientDepth(Errors.insufficient_depth(self._depth, k), self._depth, k)
        return self._value & ((1 << k) - 1)

    def step(self, t: int = 1) -> Residue:
        """``T**t`` at the same depth, ``t = -1`` is the inverse map."""
        return Residue(self._depth, (self._value + t) & ((1 << self._depth) - 1))

    def refine(self, bit: int) -> Residue:
        """Appends one bit at position ``depth``."""
        return Residue(self._depth + 1, self._value | ((bit & 1) << self._depth))

    def children(self) -> Tuple[Residue, Residue]:
        return self.refine(0), self.refine(1)

    def truncate(self, depth: int) -> Residue:
        return Residue(depth, self.dn(depth))


class BitStream:
    """
    A reproducible stream of fair coin flips, materialized on demand.

    Blocks of 512 bits are drawn sequentially from ``numpy.random.default_rng(seed)``, so bit
    ``i`` never depends on the order of queries.

    THREAD SAFE.

    Parameters
    ----------
    seed:
        64-bit unsigned seed.
    """

    BLOCK: int = 512

    __slots__ = ("_seed", "_rng", "_value", "_length", "_lock")

    def __init__(self, seed: int) -> None:
        self._seed: int = seed
        self._rng: np.random.Generator = np.random.default_rng(seed)
        self._value: int = 0
        self._length: int = 0
        self._lock: Lock = Lock()

    def __repr__(self) -> str:
        return f"<BitStream(seed={self._seed}, materialized={self._length})>"

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def materialized(self) -> int:
        """The number of bits drawn so far."""
        return self._length

    def _ensure(self, length: int) -> None:
        if self._length >= length:
            return

        with self._lock:
            while self._length < length:
                flips = self._rng.integers(0, 2, size=self.BLOCK, dtype=np.uint8)
                block: int = int.from_bytes(np.packbits(flips, bitorder="little").tobytes(), "little")
                self._value |= block << self._length
                self._length += self.BLOCK

    def bit(self, index: int) -> int:
        self._ensure(index + 1)
        return (self._value >> index) & 1

    def bits(self, start: int, count: int) -> int:
        """The ``count`` bits starting at ``start`` as an integer, low bit first."""
        if count <= 0:
            return 0
        self._ensure(start + count)
        return (self._value >> start) & ((1 << count) - 1)


def derive_seed(seed: int, index: int) -> int:
    """An independent 64-bit seed for sample ``index`` of a run seeded with ``seed``."""
    sequence = np.random.SeedSequence(seed, spawn_key=(index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


class OdometerPoint:
    """
    A point of the odometer, read as a 2-adic integer.

    The first ``residue.depth`` bits are explicit. Bits beyond are given by the tail: all zeros,
    all ones, or a seeded random stream indexed by absolute bit position.

    Parameters
    ----------
    residue:
        The explicit prefix.
    tail:
        How bits beyond the prefix are produced.
    stream:
        The random stream of a seeded tail.
    """

    __slots__ = ("_prefix", "_depth", "_tail", "_stream")

    def __init__(self, residue: Residue, tail: Tail = Tail.ZEROS, stream: Optional[BitStream] = None) -> None:
        if tail is Tail.SEEDED and stream is None:
            raise ValueError("A seeded tail needs a bit stream.")

        self._prefix: int = residue.value
        self._depth: int = residue.depth
        self._tail: Tail = tail
        self._stream: Optional[BitStream] = stream if tail is Tail.SEEDED else None

    def __repr__(self) -> str:
        return f"<OdometerPoint(depth={self._depth}, prefix={self._prefix}, tail={self._tail.value})>"

    @classmethod
    def zero(cls) -> OdometerPoint:
        """The all-zeros point."""
        return cls(Residue(1, 0), Tail.ZEROS)

    @classmethod
    def ones(cls) -> OdometerPoint:
        """The all-ones point, ``T**-1`` of the zero point."""
        return cls(Residue(1, 1), Tail.ONES)

    @classmethod
    def from_bits(cls, bits: Iterable[int], tail: Tail = Tail.ZEROS) -> OdometerPoint:
        """A point with the given leading bits, ``bits[0]`` first."""
        values = list(bits)
        value: int = sum((b & 1) << i for i, b in enumerate(values))
        return cls(Residue(max(len(values), 1), value), tail)

    @classmethod
    def from_integer(cls, value: int) -> OdometerPoint:
        """The 2-adic integer ``value``. Negative values get an all-ones tail."""
        return OdometerPoint.zero().shift(value)

    @property
    def tail(self) -> Tail:
        return self._tail

    @property
    def depth(self) -> int:
        """The number of explicit bits."""
        return self._depth

    @property
    def prefix(self) -> int:
        return self._prefix

    @property
    def stream(self) -> Optional[BitStream]:
        return self._stream

    def is_zero(self) -> bool:
        return self._prefix == 0 and self._tail is Tail.ZEROS

    def bit(self, index: int) -> int:
        if index < self._depth:
            return (self._prefix >> index) & 1
        if self._tail is Tail.ZEROS:
            return 0
        if self._tail is Tail.ONES:
            return 1
        return self._stream.bit(index)  # type: ignore

    def _tail_bits(self, start: int, count: int) -> int:
        if count <= 0 or self._tail is Tail.ZEROS:
            return 0
        if self._tail is Tail.ONES:
            return (1 << count) - 1
        return self._stream.bits(start, count)  # type: ignore

    def dn(self, k: int) -> int:
        """``DN_k``, materializing tail bits when ``k`` exceeds the explicit prefix."""
        if k <= self._depth:
            return self._prefix & ((1 << k) - 1)
        return self._prefix | (self._tail_bits(self._depth, k - self._depth) << self._depth)

    def residue_at(self, depth: int) -> Residue:
        return Residue(depth, self.dn(depth))

    def _extended(self, extra: int) -> OdometerPoint:
        depth: int = self._depth + extra
        return OdometerPoint(Residue(depth, self.dn(depth)), self._tail, self._stream)

    def shift(self, t: int, scan_limit: int = SCAN_LIMIT) -> OdometerPoint:
        """
        ``T**t`` of this point, exact for every signed ``t``.

        Raises
        ------
        ScanLimitExceeded
            A carry on a seeded tail ran past the scan limit.
        """
        if t == 0:
            return self

        if self._tail is not Tail.SEEDED:
            # Constant tails are plain integers, or negative integers for an all-ones tail.
            value: int = self._prefix + t
            if self._tail is Tail.ONES:
                value -= 1 << self._depth

            if value >= 0:
                return OdometerPoint(Residue(max(self._depth, value.bit_length(), 1), value), Tail.ZEROS)

            depth: int = max(self._depth, (-value).bit_length() + 1)
            return OdometerPoint(Residue(depth, value & ((1 << depth) - 1)), Tail.ONES)

        point: OdometerPoint = self
        needed: int = abs(t).bit_length() + 1
        if point._depth < needed:
            point = point._extended(needed - point._depth)

        while True:
            total: int = point._prefix + t
            if 0 <= total < (1 << point._depth):
                return OdometerPoint(Residue(point._depth, total), Tail.SEEDED, point._stream)

            if point._depth - self._depth > scan_limit:
                raise ScanLimitExceeded(Errors.ScanLimit.value, scan_limit)

            # The carry or borrow leaves the prefix; absorb more stream bits and retry.
            point = point._extended(64)

    def run_length(self, start: int, bit: int, limit: int = SCAN_LIMIT) -> Valuation:
        """
        The number of consecutive bits equal to ``bit`` starting at ``start``.

        Returns ``math.inf`` when a constant tail continues the run forever.

        Raises
        ------
        ScanLimitExceeded
            A seeded run reaches ``limit`` bits.
        """
        position: int = start
        while position < self._depth:
            if ((self._prefix >> position) & 1) != bit:
                return position - start
            position += 1

        if self._tail is Tail.ZEROS:
            return math.inf if bit == 0 else position - start
        if self._tail is Tail.ONES:
            return math.inf if bit == 1 else position - start

        block: int = BitStream.BLOCK
        while position - start < limit:
            chunk: int = self._stream.bits(position, block)  # type: ignore
            if bit == 1:
                chunk = ~chunk & ((1 << block) - 1)
            if chunk:
                found: int = position + (chunk & -chunk).bit_length() - 1 - start
                if found < limit:
                    return found
                break
            position += block

        logging.warning("odometer -> run of %s bits from %s passed the scan limit %s.", bit, start, limit)
        raise ScanLimitExceeded(Errors.ScanLimit.value, limit)

    def kappa(self, scan_limit: int = SCAN_LIMIT) -> Valuation:
        """The 2-adic valuation, ``math.inf`` exactly for the zero point."""
        if self._prefix:
            return (self._prefix & -self._prefix).bit_length() - 1
        return self.run_length(0, 0, scan_limit)


def dn(point: Union[OdometerPoint, Residue], k: int) -> int:
    """
    ``DN_k`` of a point or residue.

    Raises
    ------
    InsufficientDepth
        ``k`` exceeds the depth of a bare residue.
    """
    return point.dn(k)


def step(residue: Residue, t: int) -> Residue:
    """The residue of ``T**t`` at the same depth."""
    return residue.step(t)


def kappa(point: Union[OdometerPoint, Residue], scan_limit: int = SCAN_LIMIT) -> Valuation:
    """
    The 2-adic valuation of a point.

    For a bare residue the valuation must be visible within the known bits, otherwise
    :class:`InsufficientDepth` is raised.
    """
    if isinstance(point, Residue):
        if point.value == 0:
            raise InsufficientDepth(
                Errors.insufficient_depth(point.depth, point.depth + 1), point.depth, point.depth + 1
            )
        return (point.value & -point.value).bit_length() - 1
    return point.kappa(scan_limit)


def sample_point(seed: int) -> OdometerPoint:
    """A point whose bits are fair coin flips drawn deterministically from ``seed``."""
    stream: BitStream = BitStream(seed)
    return OdometerPoint(Residue(64, stream.bits(0, 64)), Tail.SEEDED, stream)
