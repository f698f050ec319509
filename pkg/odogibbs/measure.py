from __future__ import annotations

import heapq
import logging
import math

from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .coding import MIN_RUN, Family, classify, orbit_letters, q_coefficient
from .enums import FamilyKind, Letter, Polarity
from .exactnum import ONE, DyadicInterval, DyadicRational
from .exceptions import ScanLimitExceeded
from .language import Word
from .odometer import SCAN_LIMIT, OdometerPoint, derive_seed, sample_point
from .pool import WorkerPool
from .result import Result

Constraint = Tuple[int, Family, Polarity]

# Enclosures are accumulated as integer multiples of 2**-GRID.
GRID: int = 192

# Deepest residue level that is enumerated at once.
BASE_LIMIT: int = 20

MAX_DEPTH_CAP: int = 128

DEFAULT_TOLERANCE: DyadicRational = DyadicRational.power_of_two(-24)
DEFAULT_DEPTH_CAP: int = 40
NODE_BUDGET: int = 1 << 18


class WindowEvent:
    """
    The event ``⋂ T**-m (S or its complement)`` over a finite set of constraints.

    Parameters
    ----------
    constraints:
        ``(offset, set, polarity)`` triples with distinct offsets.

    Raises
    ------
    ValueError
        Two constraints share an offset.
    """

    __slots__ = ("_constraints",)

    def __init__(self, constraints: Iterable[Constraint] = ()) -> None:
        ordered: List[Constraint] = sorted(constraints, key=lambda c: c[0])
        offsets: List[int] = [c[0] for c in ordered]
        if len(set(offsets)) != len(offsets):
            raise ValueError("Window event offsets must be distinct.")

        self._constraints: Tuple[Constraint, ...] = tuple(ordered)

    def __repr__(self) -> str:
        return f"<WindowEvent({self.key()})>"

    def __len__(self) -> int:
        return len(self._constraints)

    def __hash__(self) -> int:
        return hash(self._constraints)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WindowEvent):
            return NotImplemented
        return self._constraints == other._constraints

    @property
    def constraints(self) -> Tuple[Constraint, ...]:
        return self._constraints

    @classmethod
    def cylinder(cls, word: Word, start: int = 0) -> WindowEvent:
        """``Φ(x)`` reads ``word`` at positions ``start..start+n-1``: β is in ``A``, α is out."""
        polarity = {Letter.BETA: Polarity.IN, Letter.ALPHA: Polarity.OUT}
        return cls((start + j, Family.A(), polarity[letter]) for j, letter in enumerate(word))

    def shifted(self, t: int) -> WindowEvent:
        return WindowEvent((offset + t, family, polarity) for offset, family, polarity in self._constraints)

    @property
    def span(self) -> int:
        """Distance between the extreme offsets plus one, 0 for the empty event."""
        if not self._constraints:
            return 0
        return self._constraints[-1][0] - self._constraints[0][0] + 1

    def key(self) -> str:
        """Stable text form, ``A@0:in,A@1:out``."""
        return ",".join(f"{family!r}@{offset}:{polarity.value}" for offset, family, polarity in self._constraints)


class MeasureResult:
    """
    A rigorous enclosure of a ν-probability.

    Attributes
    ----------
    interval:
        Contains the true probability.
    depth_used:
        Deepest residue level that was examined.
    undetermined_mass:
        Width of the interval.
    converged:
        False when the tolerance was not met within the depth cap or the node budget.
    """

    __slots__ = ("interval", "depth_used", "undetermined_mass", "converged")

    def __init__(self, interval: DyadicInterval, depth_used: int, converged: bool = True) -> None:
        self.interval: DyadicInterval = interval
        self.depth_used: int = depth_used
        self.undetermined_mass: DyadicRational = interval.width()
        self.converged: bool = converged

    def __repr__(self) -> str:
        return f"<MeasureResult(interval={self.interval}, depth_used={self.depth_used}, converged={self.converged})>"

    @property
    def lo(self) -> DyadicRational:
        return self.interval.lo

    @property
    def hi(self) -> DyadicRational:
        return self.interval.hi

    def as_row(self, event: str) -> Dict[str, Any]:
        return {
            "event": event,
            "lo": self.interval.lo,
            "hi": self.interval.hi,
            "depth_used": self.depth_used,
            "converged": self.converged,
        }


def _hits_array(values: np.ndarray, lo: int, hi: int) -> np.ndarray:
    found = np.zeros(values.shape, dtype=bool)
    for i in range(max(lo, 1), hi + 1):
        found |= (values & np.uint64((1 << i) - 1)) < np.uint64(i)
    return found


def _states(values: np.ndarray, depth: int, family: Family) -> np.ndarray:
    """Vector form of :func:`classify`: 1 certainly in, -1 certainly out, 0 undecided."""
    kind, parameter = family.kind, family.parameter
    states = np.zeros(values.shape, dtype=np.int8)

    if kind is FamilyKind.A:
        states[_hits_array(values, MIN_RUN, depth)] = 1
    elif kind is FamilyKind.E_K:
        states[_hits_array(values, parameter + 1, depth)] = 1
    elif kind is FamilyKind.A_K:
        inside = _hits_array(values, MIN_RUN, min(depth, parameter))
        if depth >= parameter:
            states[:] = -1
        else:
            states[values >= np.uint64(parameter)] = -1
        states[inside] = 1
    elif depth >= parameter:
        low = values & np.uint64((1 << parameter) - 1)
        states[:] = -1
        states[(low < np.uint64(parameter)) & ~_hits_array(low, MIN_RUN, parameter - 1)] = 1
    else:
        states[_hits_array(values, MIN_RUN, depth) | (values >= np.uint64(parameter))] = -1

    return states


def _units(mass: DyadicRational, depth: int) -> int:
    """``ceil(mass * 2**-depth)`` in grid units."""
    return int(mass.shift(GRID - depth).ceil_to(0))


def _evaluate(constraints: Sequence[Constraint], value: int, depth: int) -> Tuple[int, int]:
    """Grid-unit bounds ``(lo, hi)`` of the event probability inside one residue cylinder."""
    mask: int = (1 << depth) - 1
    whole: int = 1 << (GRID - depth)

    all_in: bool = True
    out_units: int = 0
    in_bound: DyadicRational = ONE

    for offset, family, polarity in constraints:
        membership = classify((value + offset) & mask, depth, family)

        if polarity is Polarity.IN:
            if membership.is_in:
                continue
            if membership.is_out:
                return 0, 0
            all_in = False
            in_bound = min(in_bound, membership.mass)
        else:
            if membership.is_out:
                continue
            if membership.is_in:
                return 0, 0
            out_units += _units(membership.mass, depth)

    lo: int = max(whole - out_units, 0) if all_in else 0
    return lo, _units(in_bound, depth)


def base_depth(event: WindowEvent, depth_cap: int) -> int:
    """The residue level enumerated before refinement starts."""
    return min(max(event.span.bit_length() + 8, 12), depth_cap, BASE_LIMIT)


@lru_cache(maxsize=4096)
def event_measure(
    event: WindowEvent,
    tolerance: DyadicRational = DEFAULT_TOLERANCE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    node_budget: int = NODE_BUDGET,
) -> MeasureResult:
    """
    Encloses ``ν(event)`` by adaptive refinement of residue cylinders.

    Every residue at the base depth is classified at once. Undecided residues enter a priority
    queue keyed by their undetermined mass and are split one bit at a time, the largest first.
    Refinement stops at the tolerance or at the budget, and also once the widest node sits at
    ``depth_cap``. For a fixed base depth the order of splits does not depend on ``depth_cap``,
    so a larger cap continues the run of a smaller one and never widens the result. The reported interval is the intersection of every intermediate enclosure.

    Parameters
    ----------
    event:
        The event to measure.
    tolerance:
        Target width, positive.
    depth_cap:
        Deepest residue level, at most 128.
    node_budget:
        Largest number of residue splits.

    Raises
    ------
    ValueError
        A nonpositive tolerance or a depth cap outside ``[5, 128]``.
    """
    if tolerance <= 0:
        raise ValueError("The tolerance must be positive.")
    if not MIN_RUN <= depth_cap <= MAX_DEPTH_CAP:
        raise ValueError(f"depth_cap must lie in [{MIN_RUN}, {MAX_DEPTH_CAP}], got {depth_cap}.")

    if not event.constraints:
        return MeasureResult(DyadicInterval.point(ONE), 0)

    constraints = event.constraints
    depth: int = base_depth(event, depth_cap)
    target: int = _units(tolerance, 0) if tolerance.magnitude() > -GRID else 0

    values = np.arange(1 << depth, dtype=np.uint64)
    modulus: int = 1 << depth
    satisfied = np.ones(values.shape, dtype=bool)
    violated = np.zeros(values.shape, dtype=bool)

    for offset, family, polarity in constraints:
        states = _states((values + np.uint64(offset % modulus)) & np.uint64(modulus - 1), depth, family)
        wanted: int = 1 if polarity is Polarity.IN else -1
        satisfied &= states == wanted
        violated |= states == -wanted

    lo: int = int(np.count_nonzero(satisfied)) << (GRID - depth)
    hi: int = lo

    heap: List[Tuple[int, int, int, int, int]] = []
    for value in np.flatnonzero(~satisfied & ~violated).tolist():
        node_lo, node_hi = _evaluate(constraints, value, depth)
        lo += node_lo
        hi += node_hi
        if node_hi > node_lo:
            heap.append((node_lo - node_hi, depth, value, node_lo, node_hi))
    heapq.heapify(heap)

    best_lo, best_hi = lo, min(hi, 1 << GRID)
    deepest: int = depth
    splits: int = 0

    while heap and best_hi - best_lo > target:
        # The widest node cannot be split past the cap.
        if heap[0][1] >= depth_cap:
            logging.debug("measure -> %s: widest node reached depth %s.", event.key(), depth_cap)
            break
        if splits >= node_budget:
            break
        splits += 1

        _, node_depth, value, node_lo, node_hi = heapq.heappop(heap)
        lo -= node_lo
        hi -= node_hi
        child_depth: int = node_depth + 1
        deepest = max(deepest, child_depth)

        for child in (value, value | (1 << node_depth)):
            child_lo, child_hi = _evaluate(constraints, child, child_depth)
            lo += child_lo
            hi += child_hi
            if child_hi > child_lo:
                heapq.heappush(heap, (child_lo - child_hi, child_depth, child, child_lo, child_hi))

        best_lo, best_hi = max(best_lo, lo), min(best_hi, hi)

    converged: bool = best_hi - best_lo <= target
    if not converged:
        logging.warning(
            "measure -> %s did not reach the tolerance by depth %s (%s splits).", event.key(), deepest, splits
        )

    interval = DyadicInterval(DyadicRational(best_lo, -GRID), DyadicRational(best_hi, -GRID))
    return MeasureResult(interval, deepest, converged)


def mu_cylinder(
    word: Word, tolerance: DyadicRational = DEFAULT_TOLERANCE, depth_cap: int = DEFAULT_DEPTH_CAP
) -> MeasureResult:
    """Encloses ``μ(⟦word⟧) = ν(Φ(x) reads word at 0..n-1)``."""
    return event_measure(WindowEvent.cylinder(word), tolerance, depth_cap)


def nu_A_series(terms: int) -> DyadicInterval:  # noqa: N802
    """
    ``ν(A)`` from its decomposition into the disjoint sets ``B_m``.

    The sum of ``q_m 2**-m`` for ``m`` up to ``terms`` is exact; every later ``q_m`` is 0 or 1,
    so the tail adds at most ``2**-terms``.

    Raises
    ------
    ValueError
        ``terms < 6``.
    """
    if terms < MIN_RUN + 1:
        raise ValueError(f"The series needs at least {MIN_RUN + 1} terms, got {terms}.")

    total: DyadicRational = DyadicRational(5, -5)
    for m in range(MIN_RUN + 1, terms + 1):
        if q_coefficient(m):
            total = total + DyadicRational.power_of_two(-m)

    return DyadicInterval(total, total + DyadicRational.power_of_two(-terms))


class MonteCarloEstimate:
    """
    Sample estimate of a cylinder measure.

    Attributes
    ----------
    estimate:
        Fraction of kept samples whose window matches.
    standard_error:
        Binomial standard error over the kept samples.
    samples:
        Samples requested.
    discards:
        Samples dropped at the scan limit.
    """

    __slots__ = ("estimate", "standard_error", "samples", "discards")

    def __init__(self, estimate: float, standard_error: float, samples: int, discards: int) -> None:
        self.estimate: float = estimate
        self.standard_error: float = standard_error
        self.samples: int = samples
        self.discards: int = discards

    def __repr__(self) -> str:
        return (
            f"<MonteCarloEstimate(estimate={self.estimate}, standard_error={self.standard_error}, "
            f"discards={self.discards})>"
        )

    @property
    def discard_fraction(self) -> float:
        return self.discards / self.samples


def _sample_matches(word: Word, seed: int, index: int, scan_limit: int) -> Result[bool]:
    point: OdometerPoint = sample_point(derive_seed(seed, index))
    try:
        letters = orbit_letters(point, len(word), scan_limit=scan_limit)
    except ScanLimitExceeded as exception:
        return Result.fail(str(exception))

    expected = np.array([letter is Letter.BETA for letter in word], dtype=bool)
    return Result.ok(bool(np.array_equal(letters, expected)))


def monte_carlo_cylinder(
    word: Word,
    samples: int,
    seed: int = 0,
    scan_limit: int = SCAN_LIMIT,
    pool: Optional[WorkerPool] = None,
) -> MonteCarloEstimate:
    """
    Estimates ``μ(⟦word⟧)`` from seeded samples of ``ν``.

    Sample ``i`` uses the seed derived from ``(seed, i)``, so the estimate does not depend on
    the number of workers.

    Raises
    ------
    ValueError
        ``samples < 1``.
    """
    if samples < 1:
        raise ValueError("At least one sample is required.")

    workers: WorkerPool = pool or WorkerPool(1)
    results: List[Result[bool]] = workers.map(
        lambda index: _sample_matches(word, seed, index, scan_limit), list(range(samples))
    )

    kept: List[bool] = [bool(result.value) for result in results if result.success]
    discards: int = samples - len(kept)
    if discards:
        logging.warning("measure -> discarded %s of %s samples at the scan limit.", discards, samples)

    if not kept:
        return MonteCarloEstimate(math.nan, math.nan, samples, discards)

    estimate: float = sum(kept) / len(kept)
    error: float = math.sqrt(estimate * (1.0 - estimate) / len(kept))
    return MonteCarloEstimate(estimate, error, samples, discards)


class FamilyRow:
    """
    ``ν(A_k)`` exactly, ``ν(E_k)`` enclosed and the bound ``h_k = (k + 2) / 2**k``.
    """

    __slots__ = ("k", "a_k", "e_k", "h_k", "converged")

    def __init__(self, k: int, a_k: DyadicRational, e_k: DyadicInterval, converged: bool) -> None:
        self.k: int = k
        self.a_k: DyadicRational = a_k
        self.e_k: DyadicInterval = e_k
        self.h_k: DyadicRational = DyadicRational(k + 2, -k)
        self.converged: bool = converged

    def __repr__(self) -> str:
        return f"<FamilyRow(k={self.k}, a_k={self.a_k}, e_k={self.e_k})>"

    @property
    def within_bound(self) -> bool:
        return self.e_k.hi <= self.h_k


def family_measures(
    k_max: int, tolerance: DyadicRational = DEFAULT_TOLERANCE, depth_cap: int = DEFAULT_DEPTH_CAP
) -> List[FamilyRow]:
    """
    One row per ``k`` in ``[5, k_max]``.

    Raises
    ------
    ValueError
        ``k_max < 5`` or ``k_max`` beyond the depth cap.
    """
    if k_max < MIN_RUN:
        raise ValueError(f"k_max must be at least {MIN_RUN}.")
    if k_max > depth_cap:
        raise ValueError("ν(A_k) is exact only at depth k, which exceeds the depth cap.")

    rows: List[FamilyRow] = []
    for k in range(MIN_RUN, k_max + 1):
        exact: MeasureResult = event_measure(
            WindowEvent([(0, Family.A_k(k), Polarity.IN)]), DyadicRational.power_of_two(-GRID // 2), depth_cap
        )
        tail: MeasureResult = event_measure(WindowEvent([(0, Family.E_k(k), Polarity.IN)]), tolerance, depth_cap)
        rows.append(FamilyRow(k, exact.interval.lo, tail.interval, exact.converged and tail.converged))

    return rows


def birkhoff_frequency(
    point: OdometerPoint, word: Word, steps: int, scan_limit: int = SCAN_LIMIT
) -> Tuple[int, float]:
    """
    ``(count, frequency)`` of ``t < steps`` where the coded orbit reads ``word`` from ``t`` on.

    Raises
    ------
    ScanLimitExceeded
        A letter of the orbit could not be resolved.
    """
    if steps < 1:
        raise ValueError("At least one step is required.")

    letters = orbit_letters(point, steps + len(word) - 1, scan_limit=scan_limit)
    matched = np.ones(steps, dtype=bool)
    for j, letter in enumerate(word):
        matched &= letters[j : j + steps] == (letter is Letter.BETA)

    count: int = int(np.count_nonzero(matched))
    return count, count / steps


class FixedPointMeasure:
    """
    The Dirac mass at the all-β fixed point ``o``, the second ergodic measure of the subshift.
    """

    __slots__ = ()

    def __repr__(self) -> str:
        return "<FixedPointMeasure(o=b^Z)>"

    def cylinder(self, word: Word) -> DyadicRational:
        """1 for ``β^n``, 0 otherwise."""
        return ONE if word.mask == (1 << len(word)) - 1 else DyadicRational(0)


def fixed_point_measure() -> FixedPointMeasure:
    return FixedPointMeasure()
