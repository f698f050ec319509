from __future__ import annotations

import logging
import math

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..coding import orbit_letters
from ..enums import Errors
from ..exactnum import DyadicInterval, DyadicRational, RealInterval
from ..exceptions import CostGuard, ScanLimitExceeded
from ..language import Word
from ..measure import (
    DEFAULT_DEPTH_CAP,
    DEFAULT_TOLERANCE,
    MeasureResult,
    birkhoff_frequency,
    mu_cylinder,
    nu_A_series,
)
from ..odometer import SCAN_LIMIT, OdometerPoint, derive_seed, sample_point
from ..pool import WorkerPool
from ..result import Result
from .potential import PotentialParams

# Largest discard rate accepted by the aggregate gate.
MAX_DISCARD_RATE: float = 0.05

# Fraction of decreasing trajectories reported as the diagnostic target.
TRAJECTORY_TARGET: float = 0.9

# Longest window whose cylinder measure is computed.
SCAN_MAX_LEN: int = 64


class ScanRow:
    """
    ``(1/n) log R_n`` for one sample, where ``R_n = μ(⟦W_n⟧) / exp(-nP(ψ) + S_nψ(Φ(x)))``.

    ``Φ(x)`` lies in the subshift, so ``S_nψ`` is exactly ``-beta_weight`` times the β count of
    ``W_n``.
    """

    __slots__ = ("sample", "n", "word", "measure", "log_ratio")

    def __init__(self, sample: int, n: int, word: Word, measure: MeasureResult, log_ratio: RealInterval) -> None:
        self.sample: int = sample
        self.n: int = n
        self.word: Word = word
        self.measure: MeasureResult = measure
        self.log_ratio: RealInterval = log_ratio

    def __repr__(self) -> str:
        return f"<ScanRow(sample={self.sample}, n={self.n}, log_ratio={self.log_ratio})>"

    @property
    def converged(self) -> bool:
        """The cylinder measure converged and has a positive lower end."""
        return self.measure.converged and not self.measure.lo.is_zero()

    @property
    def magnitude(self) -> float:
        """``|(1/n) log R_n|`` at the interval midpoint, ``inf`` when unbounded."""
        if math.isinf(self.log_ratio.lo) or math.isinf(self.log_ratio.hi):
            return math.inf
        return abs(self.log_ratio.midpoint())

    def as_row(self) -> Dict[str, Any]:
        return {
            "kind": "sample",
            "sample": self.sample,
            "n": self.n,
            "word": str(self.word),
            "lo": self.log_ratio.lo,
            "hi": self.log_ratio.hi,
            "mu_lo": self.measure.lo,
            "mu_hi": self.measure.hi,
            "converged": self.converged,
        }


class ScanReport:
    """
    Per sample rows and the aggregate statistics of a very weak Gibbs scan.

    Attributes
    ----------
    medians:
        Median of ``|(1/n) log R_n|`` over the samples, per ``n``.
    decreasing_fraction:
        Fraction of complete trajectories whose magnitudes strictly decrease along ``ns``.
    non_generic:
        Sample indices excluded as non-generic points.
    discards:
        Samples dropped at the scan limit.
    unresolved:
        Sample indices with a cylinder measure that did not converge. Their rows stay in
        ``rows`` but are left out of the aggregates and count towards the discard rate.
    """

    __slots__ = ("ns", "rows", "samples", "discards", "non_generic", "unresolved", "medians", "decreasing_fraction")

    def __init__(self, ns: Sequence[int], rows: List[ScanRow], samples: int, discards: int, non_generic: List[int]) -> None:
        self.ns: Tuple[int, ...] = tuple(sorted(ns))
        self.rows: List[ScanRow] = sorted(rows, key=lambda row: (row.sample, row.n))
        self.samples: int = samples
        self.discards: int = discards
        self.non_generic: List[int] = sorted(non_generic)
        self.unresolved: List[int] = sorted({row.sample for row in self.rows if not row.converged})
        self.medians: Dict[int, float] = self._medians()
        self.decreasing_fraction: float = self._decreasing_fraction()

    def __repr__(self) -> str:
        return (
            f"<ScanReport(samples={self.samples}, medians={self.medians}, "
            f"decreasing_fraction={self.decreasing_fraction}, discards={self.discards}, "
            f"unresolved={len(self.unresolved)})>"
        )

    def _resolved_rows(self) -> List[ScanRow]:
        excluded = set(self.unresolved)
        return [row for row in self.rows if row.sample not in excluded]

    def _medians(self) -> Dict[int, float]:
        resolved: List[ScanRow] = self._resolved_rows()
        medians: Dict[int, float] = {}
        for n in self.ns:
            values = [row.magnitude for row in resolved if row.n == n]
            medians[n] = float(np.median(values)) if values else math.nan
        return medians

    def _decreasing_fraction(self) -> float:
        trajectories: Dict[int, Dict[int, float]] = {}
        for row in self._resolved_rows():
            trajectories.setdefault(row.sample, {})[row.n] = row.magnitude

        complete = [values for values in trajectories.values() if len(values) == len(self.ns)]
        if not complete:
            return 0.0

        decreasing: int = sum(
            all(values[a] > values[b] for a, b in zip(self.ns, self.ns[1:])) for values in complete
        )
        return decreasing / len(complete)

    @property
    def discard_rate(self) -> float:
        """Samples dropped at the scan limit or left unresolved, over all samples."""
        return (self.discards + len(self.unresolved)) / self.samples if self.samples else 0.0

    @property
    def median_decreasing(self) -> bool:
        """The median strictly decreases between consecutive ``n``."""
        return all(self.medians[a] > self.medians[b] for a, b in zip(self.ns, self.ns[1:]))

    @property
    def converged(self) -> bool:
        return all(row.converged for row in self.rows)

    @property
    def gate(self) -> bool:
        """Median decrease with a discard rate below 5%."""
        return self.median_decreasing and self.discard_rate < MAX_DISCARD_RATE

    def summary(self) -> Dict[str, Any]:
        return {
            "kind": "aggregate",
            "samples": self.samples,
            "discards": self.discards,
            "discard_rate": self.discard_rate,
            "non_generic": len(self.non_generic),
            "unresolved": len(self.unresolved),
            "medians": ";".join(f"{n}:{self.medians[n]:.17g}" for n in self.ns),
            "median_decreasing": self.median_decreasing,
            "decreasing_fraction": self.decreasing_fraction,
            "trajectories_ok": self.decreasing_fraction >= TRAJECTORY_TARGET,
            "pass": self.gate,
        }


def _log_ratio(measure: MeasureResult, exponent: RealInterval, n: int) -> RealInterval:
    hi: float = RealInterval.from_dyadic(measure.hi).log().hi if not measure.hi.is_zero() else -math.inf
    if measure.lo.is_zero():
        log_mu = RealInterval(-math.inf, hi)
    else:
        log_mu = measure.interval.to_real().log()
    return (log_mu - exponent) / float(n)


def _scan_sample(
    sample: int,
    point: OdometerPoint,
    ns: Sequence[int],
    mu_beta: DyadicInterval,
    params: PotentialParams,
    tolerance: DyadicRational,
    depth_cap: int,
    scan_limit: int,
) -> Result[List[ScanRow]]:
    if point.is_zero():
        return Result.fail(Errors.NonGeneric.value)

    try:
        letters = orbit_letters(point, max(ns), scan_limit=scan_limit)
    except ScanLimitExceeded as exception:
        return Result.fail(str(exception))

    rows: List[ScanRow] = []
    for n in ns:
        mask: int = sum(1 << j for j in np.flatnonzero(letters[:n]).tolist())
        word = Word(n, mask)
        measure: MeasureResult = mu_cylinder(word, tolerance, depth_cap)

        # -nP(ψ) + S_nψ(Φ(x)) = beta_weight * (n μ(⟦β⟧) - βcount), exact before rounding.
        exponent: RealInterval = (mu_beta.scale(n) - word.beta_count).scale(params.beta_weight).to_real()
        rows.append(ScanRow(sample, n, word, measure, _log_ratio(measure, exponent, n)))

    return Result.ok(rows)


def very_weak_scan(
    samples: int,
    ns: Sequence[int] = (16, 32),
    seed: int = 0,
    tolerance: DyadicRational = DEFAULT_TOLERANCE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    params: Optional[PotentialParams] = None,
    series_terms: int = 32,
    scan_limit: int = SCAN_LIMIT,
    pool: Optional[WorkerPool] = None,
    points: Optional[Sequence[OdometerPoint]] = None,
) -> ScanReport:
    """
    Samples points of the odometer and reports ``(1/n) log R_n`` along each coded orbit.

    Nothing is asserted per sample. The zero point is excluded and flagged as non-generic, and
    samples whose letters need more than ``scan_limit`` bits are discarded and counted.

    Parameters
    ----------
    samples:
        Number of seeded samples. Ignored when ``points`` is given.
    ns:
        Window lengths, each at least 1.
    points:
        Explicit points to scan instead of seeded samples.

    Raises
    ------
    ValueError
        No samples, or an empty or nonpositive ``ns``.
    CostGuard
        A window longer than 64.
    """
    if points is None and samples < 1:
        raise ValueError("At least one sample is required.")
    if not ns or min(ns) < 1:
        raise ValueError("Window lengths must be positive.")
    if max(ns) > SCAN_MAX_LEN:
        raise CostGuard(Errors.window_too_long(max(ns), SCAN_MAX_LEN))

    params = params or PotentialParams()
    workers: WorkerPool = pool or WorkerPool(1)
    chosen: List[OdometerPoint] = (
        list(points) if points is not None else [sample_point(derive_seed(seed, index)) for index in range(samples)]
    )
    mu_beta: DyadicInterval = nu_A_series(series_terms)

    results: List[Result[List[ScanRow]]] = workers.map(
        lambda index: _scan_sample(
            index, chosen[index], ns, mu_beta, params, tolerance, depth_cap, scan_limit
        ),
        list(range(len(chosen))),
    )

    rows: List[ScanRow] = []
    non_generic: List[int] = []
    discards: int = 0
    for index, result in enumerate(results):
        if result.success:
            rows.extend(result.unwrap())
        elif result.error == Errors.NonGeneric.value:
            non_generic.append(index)
        else:
            discards += 1

    report = ScanReport(ns, rows, len(chosen), discards, non_generic)
    if discards:
        logging.warning("scan -> discarded %s of %s samples at the scan limit.", discards, len(chosen))
    logging.info("scan -> medians %s, decreasing fraction %.3f.", report.medians, report.decreasing_fraction)
    return report


class ProxyRow:
    """
    Birkhoff frequencies of one word along sampled orbits, against its cylinder measure.

    A frequency passes when it lies in the measure interval widened by three binomial standard
    errors.
    """

    __slots__ = ("word", "measure", "instances", "violations", "worst_margin", "discards")

    def __init__(
        self, word: Word, measure: MeasureResult, instances: int, violations: int, worst_margin: float, discards: int
    ) -> None:
        self.word: Word = word
        self.measure: MeasureResult = measure
        self.instances: int = instances
        self.violations: int = violations
        self.worst_margin: float = worst_margin
        self.discards: int = discards

    def __repr__(self) -> str:
        return f"<ProxyRow(word={self.word}, instances={self.instances}, violations={self.violations})>"

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_row(self) -> Dict[str, Any]:
        return {
            "kind": "ergodicity",
            "word": str(self.word),
            "mu_lo": self.measure.lo,
            "mu_hi": self.measure.hi,
            "instances": self.instances,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "discards": self.discards,
            "pass": self.passed,
        }


def short_words(lengths: Sequence[int] = (2, 3)) -> List[Word]:
    """Every word of the given lengths, shortest first."""
    return [Word(length, mask) for length in lengths for mask in range(1 << length)]


def ergodicity_proxy(
    samples: int = 20,
    steps: int = 1 << 16,
    seed: int = 0,
    words: Optional[Sequence[Word]] = None,
    tolerance: DyadicRational = DEFAULT_TOLERANCE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    scan_limit: int = SCAN_LIMIT,
) -> List[ProxyRow]:
    """
    Compares Birkhoff frequencies of short words with their cylinder measures.

    Every sampled orbit should see each word with frequency inside
    ``[μ.lo - 3 se, μ.hi + 3 se]``, where ``se = sqrt(m (1 - m) / steps)`` at the midpoint ``m``.
    Defaults to every word of length 2 and 3.
    """
    if samples < 1 or steps < 1:
        raise ValueError("At least one sample and one step are required.")

    chosen: List[Word] = list(words) if words is not None else short_words()
    points: List[OdometerPoint] = [sample_point(derive_seed(seed, index)) for index in range(samples)]

    rows: List[ProxyRow] = []
    for word in chosen:
        measure: MeasureResult = mu_cylinder(word, tolerance, depth_cap)
        middle: float = float(measure.interval.midpoint())
        error: float = math.sqrt(max(middle * (1.0 - middle), 0.0) / steps)
        low: float = float(measure.lo) - 3.0 * error
        high: float = float(measure.hi) + 3.0 * error

        instances, violations, discards = 0, 0, 0
        worst: float = math.inf
        for point in points:
            try:
                _, frequency = birkhoff_frequency(point, word, steps, scan_limit)
            except ScanLimitExceeded:
                discards += 1
                continue

            instances += 1
            margin: float = min(frequency - low, high - frequency)
            worst = min(worst, margin)
            if margin < 0.0:
                violations += 1

        rows.append(ProxyRow(word, measure, instances, violations, worst, discards))
        logging.debug("scan -> proxy %s: %s violations over %s orbits.", word, violations, instances)

    return rows
