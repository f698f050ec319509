from __future__ import annotations

import logging
import math

from typing import Any, Dict, List

import numpy as np

from ..coding import MIN_RUN, orbit_letters, transition_index
from ..enums import Errors
from ..exactnum import DyadicRational
from ..exceptions import ScanLimitExceeded
from ..odometer import SCAN_LIMIT, OdometerPoint
from ..result import Result


class OrbitStructure:
    """
    The block structure of a normalized orbit and its visits to ``E_k``.

    The orbit starts at ``y = T**shift(x)``, the first point of a β run. Blocks are
    ``O_p = [n_p, n_{p+1})`` with ``n_0 = 0``, ``n_{p+1} = n_p + 2**s_p`` and
    ``s_p = κ(T**n_p(y))``.

    Attributes
    ----------
    shift:
        Steps from the input point to ``y``.
    starts:
        ``n_0, n_1, ...`` up to the horizon.
    valuations:
        ``s_0, s_1, ...``, one per complete block.
    counts:
        ``|O_p ∩ E_k|`` per complete block.
    visits:
        Visits to ``E_k`` in ``[0, n_p)`` for ``p >= 1``.
    """

    __slots__ = ("k", "shift", "starts", "valuations", "counts", "visits")

    def __init__(
        self, k: int, shift: int, starts: List[int], valuations: List[int], counts: List[int], visits: List[int]
    ) -> None:
        self.k: int = k
        self.shift: int = shift
        self.starts: List[int] = starts
        self.valuations: List[int] = valuations
        self.counts: List[int] = counts
        self.visits: List[int] = visits

    def __repr__(self) -> str:
        return f"<OrbitStructure(k={self.k}, shift={self.shift}, valuations={self.valuations})>"

    @property
    def bound(self) -> DyadicRational:
        """``h_k = (k + 2) / 2**k``."""
        return DyadicRational(self.k + 2, -self.k)

    @property
    def frequencies(self) -> List[float]:
        """Visit frequency of ``E_k`` at every ``n_p``, ``p >= 1``."""
        return [visits / start for visits, start in zip(self.visits, self.starts[1:])]

    @property
    def increasing_violations(self) -> int:
        """Consecutive valuations with ``s_{p+1} < s_p + 1``."""
        return sum(1 for a, b in zip(self.valuations, self.valuations[1:]) if b < a + 1)

    @property
    def block_violations(self) -> int:
        """Blocks with ``s_p <= k`` that meet ``E_k``."""
        return sum(1 for s, count in zip(self.valuations, self.counts) if s <= self.k and count > 0)

    @property
    def frequency_violations(self) -> int:
        """Prefixes whose visit frequency exceeds ``h_k``, compared exactly."""
        numerator: int = self.k + 2
        return sum(1 for visits, start in zip(self.visits, self.starts[1:]) if (visits << self.k) > numerator * start)

    @property
    def violations(self) -> int:
        return self.increasing_violations + self.block_violations + self.frequency_violations

    def as_row(self, sample: int) -> Dict[str, Any]:
        frequencies: List[float] = self.frequencies
        return {
            "sample": sample,
            "k": self.k,
            "shift": self.shift,
            "blocks": len(self.valuations),
            "valuations": ";".join(str(s) for s in self.valuations),
            "max_frequency": max(frequencies) if frequencies else 0.0,
            "h_k": self.bound,
            "violations": self.violations,
            "pass": self.violations == 0,
        }


def orbit_structure(
    x: OdometerPoint, k: int, horizon: int, scan_limit: int = SCAN_LIMIT
) -> Result[OrbitStructure]:
    """
    Walks the blocks of the orbit of ``x`` and counts visits to ``E_k`` inside each.

    The point is first normalized to the start of a β run, found by
    :func:`~odogibbs.coding.transition_index`. Points without a turn inside the horizon, or whose
    valuations run past the scan limit, give a failed result.

    Raises
    ------
    ValueError
        ``k < 5`` or ``horizon < 2``.
    """
    if k < MIN_RUN:
        raise ValueError(Errors.out_of_scope("k", k, MIN_RUN))
    if horizon < 2:
        raise ValueError("The horizon must be at least 2.")

    try:
        shift = transition_index(x, horizon, scan_limit)
        if shift is None:
            return Result.fail(Errors.NoTransition.value)

        y: OdometerPoint = x.shift(shift, scan_limit)
        starts: List[int] = [0]
        valuations: List[int] = []

        while True:
            s = y.shift(starts[-1], scan_limit).kappa(scan_limit)
            if math.isinf(s) or starts[-1] + (1 << int(s)) > horizon:
                break
            valuations.append(int(s))
            starts.append(starts[-1] + (1 << int(s)))

        if not valuations:
            return Result.ok(OrbitStructure(k, shift, starts, [], [], []))

        flags = orbit_letters(y, starts[-1], scan_limit=scan_limit, first=k + 1)
    except ScanLimitExceeded as exception:
        return Result.fail(str(exception))

    counts: List[int] = np.add.reduceat(flags.astype(np.int64), np.array(starts[:-1])).tolist()
    visits: List[int] = np.cumsum(counts).tolist()

    logging.debug("orbit -> k=%s shift=%s valuations=%s.", k, shift, valuations)
    return Result.ok(OrbitStructure(k, shift, starts, valuations, counts, visits))
