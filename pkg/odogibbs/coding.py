from __future__ import annotations

import logging

from functools import lru_cache
from typing import List, Optional, Tuple, Union

import numpy as np

from .enums import Errors, FamilyKind, Letter, Status, Tail
from .exactnum import ONE, ZERO, DyadicRational
from .exceptions import InsufficientDepth
from .odometer import SCAN_LIMIT, OdometerPoint, Residue
from .schedule import DepthSchedule

# The set A starts with zero runs of this length.
MIN_RUN: int = 5

# Depth at which seeded points are decided, the width of numpy's unsigned integers.
WORD_BITS: int = 64


def hits(value: int, lo: int, hi: int) -> bool:
    """
    Whether some ``i`` in ``[lo, hi]`` satisfies ``value mod 2**i < i``.

    Only the indices up to ``hi.bit_length()`` are tested one by one. Above that, a hit needs
    the bits between ``hi.bit_length()`` and ``i`` to be zero, which the trailing zero count of
    the upper part decides at once.
    """
    lo = max(lo, 1)
    if lo > hi:
        return False

    width: int = hi.bit_length()
    for i in range(lo, min(hi, width) + 1):
        if value & ((1 << i) - 1) < i:
            return True

    if hi <= width:
        return False

    low: int = value & ((1 << width) - 1)
    upper: int = value >> width
    top: int = hi if upper == 0 else min(hi, width + (upper & -upper).bit_length() - 1)
    return top >= max(lo, width + 1) and low < top


def tail_mass(value: int, depth: int, first: int) -> DyadicRational:
    """
    Upper bound on the conditional probability that an extension of ``(depth, value)`` hits
    some ``i >= first`` with ``i > depth``.

    Extensions whose bits from ``depth`` on start with zeros reach every ``i`` from
    ``max(first, depth + 1, value + 1)`` on. Any other extension needs ``i > 2**depth`` and a
    zero run of almost ``i`` bits, which the second term bounds.
    """
    start: int = max(first, depth + 1, value + 1)

    if start <= value + (1 << (depth - 1)):
        exponent: int = depth + 1 - start
    else:
        exponent = max((start + 1).bit_length(), depth) + 3 - start

    return ONE if exponent >= 0 else DyadicRational.power_of_two(exponent)


class Membership:
    """
    Tri-state answer of a membership query from finitely many bits.

    ``IN`` means every extension lies in the set. ``POSSIBLY`` carries ``tail_mass``, a bound on
    the conditional probability of lying in the set; a zero mass means certainly out.

    Attributes
    ----------
    status:
        ``Status.IN`` or ``Status.POSSIBLY``.
    tail_mass:
        Present iff the status is ``POSSIBLY``.
    """

    __slots__ = ("status", "tail_mass")

    def __init__(self, status: Status, tail_mass: Optional[DyadicRational] = None) -> None:
        if status is Status.POSSIBLY and tail_mass is None:
            raise ValueError("A possible membership needs a tail mass.")

        self.status: Status = status
        self.tail_mass: Optional[DyadicRational] = None if status is Status.IN else tail_mass

    def __repr__(self) -> str:
        if self.status is Status.IN:
            return "<Membership(status=in)>"
        return f"<Membership(status=possibly, tail_mass={self.tail_mass})>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Membership):
            return NotImplemented
        return self.status is other.status and self.tail_mass == other.tail_mass

    def __hash__(self) -> int:
        return hash((self.status, self.tail_mass))

    @classmethod
    def inside(cls) -> Membership:
        return cls(Status.IN)

    @classmethod
    def possibly(cls, mass: DyadicRational) -> Membership:
        return cls(Status.POSSIBLY, mass)

    @classmethod
    def outside(cls) -> Membership:
        return cls(Status.POSSIBLY, ZERO)

    @property
    def is_in(self) -> bool:
        return self.status is Status.IN

    @property
    def is_out(self) -> bool:
        """Certainly outside, a possible membership of zero mass."""
        return self.status is Status.POSSIBLY and self.tail_mass == 0

    @property
    def certain(self) -> bool:
        return self.is_in or self.is_out

    @property
    def mass(self) -> DyadicRational:
        """Conditional probability bound of lying in the set, 1 for ``IN``."""
        return ONE if self.tail_mass is None else self.tail_mass


class Family:
    """
    One set of the family ``A``, ``A_k``, ``E_k``, ``B_m``.

    Parameters
    ----------
    kind:
        Which set.
    parameter:
        ``k`` or ``m``, ignored for ``A``.
    """

    __slots__ = ("kind", "parameter")

    def __init__(self, kind: FamilyKind, parameter: int = MIN_RUN) -> None:
        if parameter < MIN_RUN:
            raise ValueError(f"Family parameter must be at least {MIN_RUN}, got {parameter}.")

        self.kind: FamilyKind = kind
        self.parameter: int = MIN_RUN if kind is FamilyKind.A else parameter

    def __repr__(self) -> str:
        if self.kind is FamilyKind.A:
            return "A"
        return f"{self.kind.value[0]}_{self.parameter}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.kind is other.kind and self.parameter == other.parameter

    def __hash__(self) -> int:
        return hash((self.kind, self.parameter))

    @classmethod
    def A(cls) -> Family:  # noqa: N802
        return cls(FamilyKind.A)

    @classmethod
    def A_k(cls, k: int) -> Family:  # noqa: N802
        return cls(FamilyKind.A_K, k)

    @classmethod
    def E_k(cls, k: int) -> Family:  # noqa: N802
        return cls(FamilyKind.E_K, k)

    @classmethod
    def B_m(cls, m: int) -> Family:  # noqa: N802
        return cls(FamilyKind.B_M, m)

    @classmethod
    def parse(cls, text: str) -> Family:
        """Parses ``A``, ``A_7``, ``E_5`` or ``B_6``."""
        text = text.strip()
        if text == "A":
            return cls.A()

        name, _, number = text.partition("_")
        kinds = {"A": FamilyKind.A_K, "E": FamilyKind.E_K, "B": FamilyKind.B_M}
        if name not in kinds or not number.isdigit():
            raise ValueError(f"Unknown set {text!r}.")
        return cls(kinds[name], int(number))

    def exact_depth(self) -> Optional[int]:
        """The depth from which membership is always certain, None for ``A`` and ``E_k``."""
        if self.kind in (FamilyKind.A_K, FamilyKind.B_M):
            return self.parameter
        return None


def classify(value: int, depth: int, family: Family, exact: bool = False) -> Membership:
    """
    Membership of the residue ``(depth, value)`` in ``family`` without building a Residue.

    Raises
    ------
    InsufficientDepth
        ``depth < 5``, or ``exact`` is set and the family needs more bits.
    """
    if depth < MIN_RUN:
        raise InsufficientDepth(Errors.insufficient_depth(depth, MIN_RUN), depth, MIN_RUN)

    kind, parameter = family.kind, family.parameter

    if kind is FamilyKind.A:
        if hits(value, MIN_RUN, depth):
            return Membership.inside()
        return Membership.possibly(tail_mass(value, depth, MIN_RUN))

    if kind is FamilyKind.E_K:
        if hits(value, parameter + 1, depth):
            return Membership.inside()
        return Membership.possibly(tail_mass(value, depth, parameter + 1))

    if depth < parameter and exact:
        raise InsufficientDepth(Errors.insufficient_depth(depth, parameter), depth, parameter)

    if kind is FamilyKind.A_K:
        if depth >= parameter:
            return Membership.inside() if hits(value, MIN_RUN, parameter) else Membership.outside()
        if hits(value, MIN_RUN, depth):
            return Membership.inside()
        if value >= parameter:
            return Membership.outside()
        return Membership.possibly(tail_mass(value, depth, MIN_RUN))

    # B_m: the residues below m modulo 2**m that no shorter zero run already claims.
    if depth >= parameter:
        low: int = value & ((1 << parameter) - 1)
        if low < parameter and not hits(low, MIN_RUN, parameter - 1):
            return Membership.inside()
        return Membership.outside()

    if hits(value, MIN_RUN, depth) or value >= parameter:
        return Membership.outside()

    blocks: int = -(-(parameter - value) >> depth)
    mass: DyadicRational = DyadicRational(blocks, depth - parameter)
    return Membership.possibly(min(mass, ONE))


def member_A(residue: Residue) -> Membership:  # noqa: N802
    """
    Membership of a residue in ``A``.

    Raises
    ------
    InsufficientDepth
        The residue has fewer than 5 bits.
    """
    return classify(residue.value, residue.depth, Family.A())


def member_family(residue: Residue, which: Family, exact: bool = False) -> Membership:
    """
    Membership of a residue in ``A``, ``A_k``, ``E_k`` or ``B_m``.

    ``A_k`` and ``B_m`` are exact once the depth reaches their parameter. Below that the
    answer is a sound possible membership, or :class:`InsufficientDepth` when ``exact`` is set.
    """
    return classify(residue.value, residue.depth, which, exact)


def phi_letter(residue: Residue) -> Tuple[Letter, Membership]:
    """The letter of a residue: β with certainty iff the residue is in ``A``."""
    membership: Membership = member_A(residue)
    return (Letter.BETA if membership.is_in else Letter.ALPHA), membership


def phi_window(
    point: Union[OdometerPoint, Residue], n_from: int, n_to: int, refine_to: int = WORD_BITS
) -> List[Tuple[Letter, Membership]]:
    """
    Letters ``n_from..n_to`` of the coded sequence of a point or residue.

    Letter ``j`` is read from the residue of ``T**(n_from + j)`` at the deepest depth that is
    available and at most ``refine_to``. Negative offsets shift the residue modulo its depth,
    which is exact for every offset.

    Raises
    ------
    InsufficientDepth
        ``refine_to`` is below 5.
    """
    if refine_to < MIN_RUN:
        raise InsufficientDepth(Errors.insufficient_depth(refine_to, MIN_RUN), refine_to, MIN_RUN)
    if n_from > n_to:
        raise ValueError(Errors.EmptyWindow.value)

    if isinstance(point, Residue):
        base: Residue = point.truncate(min(point.depth, refine_to))
    else:
        base = point.residue_at(refine_to)

    return [phi_letter(base.step(n)) for n in range(n_from, n_to + 1)]


@lru_cache(maxsize=1 << 16)
def q_coefficient(m: int) -> int:
    """
    ``q_m``, the number of residues modulo ``2**m`` in ``B_m``.

    It is 0 exactly when ``m - 1`` already falls in a shorter zero run window.
    """
    if m < MIN_RUN + 1:
        raise ValueError(f"q_m is defined for m >= {MIN_RUN + 1}, got {m}.")
    return 0 if hits(m - 1, MIN_RUN, m - 1) else 1


def b_m_count_enumerated(m: int) -> int:
    """
    Counts the residues of ``B_m`` at depth ``m`` by brute force over all ``2**m`` residues.

    ``B_m`` is taken literally as ``L_m`` minus the union of ``L_i`` for ``5 <= i < m``, where
    ``L_i`` holds the residues whose first ``i`` bits encode a value below ``i``.
    """
    if not MIN_RUN <= m <= 30:
        raise ValueError("Enumeration is limited to 5 <= m <= 30.")

    residues = np.arange(1 << m, dtype=np.uint64)
    shorter = np.zeros(residues.shape, dtype=bool)
    for i in range(MIN_RUN, m):
        shorter |= (residues & np.uint64((1 << i) - 1)) < np.uint64(i)

    return int(np.count_nonzero((residues < np.uint64(m)) & ~shorter))


def point_letter(point: OdometerPoint, scan_limit: int = SCAN_LIMIT, first: int = MIN_RUN) -> Letter:
    """
    The letter of a point, β iff some ``i >= first`` has ``DN_i(x) < i``.

    Constant tails are decided exactly. A seeded tail is decided from its first 64 bits and the
    zero run above them; only zero runs longer than ``2**64`` bits are neglected.

    Raises
    ------
    ScanLimitExceeded
        The zero run above bit 64 reaches the scan limit.
    """
    if point.tail is Tail.ZEROS:
        # A finite integer x lies in T^x[0^i] for every large i.
        return Letter.BETA

    depth: int = max(WORD_BITS, point.depth + 2)
    value: int = point.dn(depth)
    if hits(value, first, depth):
        return Letter.BETA

    if point.tail is Tail.ONES:
        # x = value - 2**depth with depth > bitlen(-x) + 1, so no longer window can hit.
        return Letter.ALPHA

    needed: int = max(value, first - 1) - depth + 1
    if needed <= scan_limit:
        zeros: bool = (point.dn(depth + needed) >> depth) == 0
        return Letter.BETA if zeros else Letter.ALPHA

    point.run_length(depth, 0, scan_limit)
    return Letter.ALPHA


def orbit_letters(
    point: OdometerPoint, count: int, start: int = 0, scan_limit: int = SCAN_LIMIT, first: int = MIN_RUN
) -> np.ndarray:
    """
    Letters ``start..start+count-1`` of the coded sequence as a bool array, True for β.

    With ``first`` above 5 the array marks the points of ``E_{first-1}`` instead.

    The first 64 bits of every orbit point are tested with numpy for ``first <= i < 64``. Longer
    windows depend only on the bits above 64, which are those of the point or, after a carry,
    of the point plus ``2**64``; their zero runs decide all remaining indices at once.
    """
    if count <= 0:
        return np.zeros(0, dtype=bool)

    origin: OdometerPoint = point.shift(start, scan_limit)
    if origin.tail is not Tail.SEEDED:
        return np.array(
            [point_letter(origin.shift(t), scan_limit, first) is Letter.BETA for t in range(count)], dtype=bool
        )

    value: int = origin.dn(WORD_BITS)
    low = np.uint64(value) + np.arange(count, dtype=np.uint64)
    carried = low < np.uint64(value)

    beta = np.zeros(count, dtype=bool)
    for i in range(max(first, 1), WORD_BITS):
        beta |= (low & np.uint64((1 << i) - 1)) < np.uint64(i)

    for carry in (False, True):
        selected = carried == carry
        if not selected.any():
            continue

        # Trailing zeros above bit 64: zeros of the upper part, or ones before a carry lands.
        run = origin.run_length(WORD_BITS, 1 if carry else 0, scan_limit)
        threshold = WORD_BITS + run
        if threshold < first:
            continue
        if threshold >= (1 << 64):
            beta[selected] = True
        else:
            beta[selected] |= low[selected] < np.uint64(threshold)

    return beta


def transition_index(point: OdometerPoint, horizon: int, scan_limit: int = SCAN_LIMIT) -> Optional[int]:
    """
    The first ``t`` in ``[1, horizon)`` with letter ``t - 1`` equal to α and letter ``t`` equal
    to β, or None.

    Windows grow geometrically, so points that turn early are normalized cheaply.
    """
    schedule: DepthSchedule = DepthSchedule(64, 4, max(horizon, 2))

    for window in schedule:
        letters = orbit_letters(point, window, scan_limit=scan_limit)
        turns = np.flatnonzero(~letters[:-1] & letters[1:])
        if turns.size:
            return int(turns[0]) + 1

    logging.debug("coding -> no transition within %s letters.", horizon)
    return None

