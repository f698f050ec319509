from __future__ import annotations

import logging
import math

from time import perf_counter
from typing import Any, Dict, List, Optional, Tuple

from ..coding import MIN_RUN, b_m_count_enumerated, q_coefficient
from ..enums import Side
from ..exactnum import DyadicInterval, DyadicRational, RealInterval, outward_exp
from ..language import LanguageTable, Word
from ..measure import DEFAULT_DEPTH_CAP, DEFAULT_TOLERANCE, MeasureResult, mu_cylinder, nu_A_series
from ..pool import WorkerPool
from .partition import N_MAX, partition_sum_Qn, qnl_table
from .potential import PotentialParams

# The constant K = e**36 of the pressure bound.
LOG_K: float = 36.0

# Slack allowed between consecutive values of (1/n) log Q_n.
TREND_SLACK: float = 0.05
TREND_START: int = 8

Q_CHECK_MAX: int = 20

MU_BETA_BAND: DyadicInterval = DyadicInterval(DyadicRational(5, -5), DyadicRational(6, -5))


class LemmaLimits:
    """
    Sizes of the instances a lemma report enumerates.

    Attributes
    ----------
    n_max:
        Largest ``n`` for the partition sums.
    q_max:
        Largest ``m`` of the ``q_m`` cross-check, at most 30.

    Raises
    ------
    ValueError
        ``q_max`` outside ``[6, 30]``.
    """

    __slots__ = ("n_max", "allow_large", "series_terms", "tolerance", "depth_cap", "q_max")

    def __init__(
        self,
        n_max: int = N_MAX,
        allow_large: bool = False,
        series_terms: int = 32,
        tolerance: DyadicRational = DEFAULT_TOLERANCE,
        depth_cap: int = DEFAULT_DEPTH_CAP,
        q_max: int = Q_CHECK_MAX,
    ) -> None:
        if not MIN_RUN + 1 <= q_max <= 30:
            raise ValueError("q_max must lie in [6, 30].")

        self.n_max: int = n_max
        self.allow_large: bool = allow_large
        self.series_terms: int = series_terms
        self.tolerance: DyadicRational = tolerance
        self.depth_cap: int = depth_cap
        self.q_max: int = q_max

    def __repr__(self) -> str:
        return f"<LemmaLimits(n_max={self.n_max}, series_terms={self.series_terms}, q_max={self.q_max})>"


class LemmaRow:
    """
    One verified claim.

    Attributes
    ----------
    instances:
        Number of instances checked.
    worst_margin:
        Smallest slack over the instances, negative on a violation.
    gate:
        Whether a failure of this row fails the run.
    """

    __slots__ = ("id", "instances", "worst_margin", "violations", "gate")

    def __init__(self, id: str, instances: int, worst_margin: float, violations: int, gate: bool) -> None:  # noqa: A002
        self.id: str = id
        self.instances: int = instances
        self.worst_margin: float = worst_margin
        self.violations: int = violations
        self.gate: bool = gate

    def __repr__(self) -> str:
        return f"<LemmaRow(id={self.id}, instances={self.instances}, violations={self.violations}, gate={self.gate})>"

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_row(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "instances": self.instances,
            "worst_margin": self.worst_margin,
            "pass": self.passed,
            "violations": self.violations,
            "gate": self.gate,
        }


class _Tally:
    __slots__ = ("instances", "violations", "worst")

    def __init__(self) -> None:
        self.instances: int = 0
        self.violations: int = 0
        self.worst: float = math.inf

    def add(self, margin: float, holds: bool, weight: int = 1) -> None:
        self.instances += weight
        self.worst = min(self.worst, margin)
        if not holds:
            self.violations += weight

    def row(self, id: str, gate: bool) -> LemmaRow:  # noqa: A002
        return LemmaRow(id, self.instances, self.worst if self.instances else 0.0, self.violations, gate)


def _log_margin(value: float, bound: float) -> float:
    """``log(bound / value)``, infinite for a vanishing value."""
    if value <= 0.0:
        return math.inf
    if bound <= 0.0:
        return -math.inf
    return math.log(bound) - math.log(value)


def _beta_counts(table: LanguageTable, length: int, side: Side = Side.UNDER) -> Dict[int, int]:
    counts: Dict[int, int] = {}
    for mask in table.masks(length, side):
        beta: int = bin(mask).count("1")
        counts[beta] = counts.get(beta, 0) + 1
    return counts


def check_word_counts(table: LanguageTable, side: Side) -> _Tally:
    """``|L_d| <= 2 (d + 1)**3`` for every ``d`` up to the table length."""
    tally = _Tally()
    for d in range(1, table.max_len + 1):
        count: int = len(table.masks(d, side))
        bound: int = 2 * (d + 1) ** 3
        tally.add(float(bound - count), count <= bound)
    return tally


def check_beta_count(table: LanguageTable, level: int) -> _Tally:
    """Every certified word of length ``2**level`` has at least ``level - 1`` β's."""
    tally = _Tally()
    length: int = 1 << level
    if length > table.max_len:
        return tally

    for beta, count in _beta_counts(table, length).items():
        tally.add(float(beta - (level - 1)), beta >= level - 1, count)
    return tally


def check_birkhoff_bound(
    table: LanguageTable, mu_beta: DyadicInterval, params: PotentialParams, constant: float
) -> _Tally:
    """
    ``S_dψ0(y) <= -beta_weight μ(⟦β⟧) d + constant + 2 log2 d`` for every certified word.

    The bound uses the upper end of ``μ(⟦β⟧)`` and the lower end of its own enclosure.
    """
    tally = _Tally()
    mu_hi: RealInterval = RealInterval.from_dyadic(mu_beta.hi)
    log_two: RealInterval = RealInterval(2.0).log()

    for d in range(1, table.max_len + 1):
        log2_d: RealInterval = RealInterval(float(d)).log() / log_two
        bound: RealInterval = mu_hi * float(-params.beta_weight * d) + constant + log2_d * 2.0

        for beta, count in _beta_counts(table, d).items():
            value: float = -float(params.beta_weight * beta)
            tally.add(bound.lo - value, value <= bound.lo, count)
    return tally


def check_block_sums(
    qnl: Dict[Tuple[int, int], RealInterval], mu_beta: DyadicInterval, params: PotentialParams
) -> _Tally:
    """``Q_n^l <= 2**-l exp(-beta_weight μ(⟦β⟧) n)`` with the lower end of ``μ(⟦β⟧)``."""
    tally = _Tally()
    mu_lo: RealInterval = RealInterval.from_dyadic(mu_beta.lo)

    for (n, parts), value in sorted(qnl.items()):
        bound: RealInterval = outward_exp(mu_lo * float(-params.beta_weight * n)) * math.ldexp(1.0, -parts)
        tally.add(_log_margin(value.hi, bound.lo), value.hi <= bound.lo)
    return tally


def check_measure_bounds(measures: List[DyadicInterval]) -> _Tally:
    """
    The enclosures of ``μ(⟦β⟧)`` overlap and their common part lies in ``[5/32, 6/32]``.

    Each enclosure holds the true value, so an enclosure that pokes past the band still passes
    when another one pins the value inside.
    """
    tally = _Tally()
    common: Optional[DyadicInterval] = measures[0] if measures else None
    for interval in measures[1:]:
        common = None if common is None else common.intersection(interval)

    if common is None:
        tally.add(-math.inf, False)
        return tally

    margin: float = float(min(common.lo - MU_BETA_BAND.lo, MU_BETA_BAND.hi - common.hi))
    tally.add(margin, MU_BETA_BAND.contains(common), len(measures))
    return tally


def check_q_coefficients(q_max: int) -> _Tally:
    """``q_m`` from its closed form equals the residue enumeration of ``B_m``."""
    tally = _Tally()
    for m in range(MIN_RUN + 1, q_max + 1):
        closed, enumerated = q_coefficient(m), b_m_count_enumerated(m)
        tally.add(-float(abs(closed - enumerated)), closed == enumerated)
    return tally


def lemma_report(
    table: LanguageTable,
    params: Optional[PotentialParams] = None,
    limits: Optional[LemmaLimits] = None,
    pool: Optional[WorkerPool] = None,
) -> List[LemmaRow]:
    """
    Verifies every quantitative claim over all enumerated instances.

    Failures are rows, not exceptions. Rows with ``gate`` set decide the outcome of a run; the
    others are diagnostics.

    Raises
    ------
    CostGuard
        ``limits.n_max`` is past the enumeration limit.
    """
    params = params or PotentialParams()
    limits = limits or LemmaLimits()
    started: float = perf_counter()

    mu_beta: DyadicInterval = nu_A_series(limits.series_terms)
    measured: MeasureResult = mu_cylinder(Word.beta(1), limits.tolerance, limits.depth_cap)

    rows: List[LemmaRow] = [
        check_word_counts(table, Side.UNDER).row("exist1", True),
        check_word_counts(table, Side.OVER).row("exist1-over", False),
    ]
    rows.extend(check_beta_count(table, level).row(f"beta-count-l{level}", level >= 5) for level in range(3, 7))
    rows.append(check_birkhoff_bound(table, mu_beta, params, 6.0).row("exist2", True))
    rows.append(check_birkhoff_bound(table, mu_beta, params, 4.0).row("exist2-plus4", False))

    n_max: int = limits.n_max
    under = qnl_table(n_max, table, params, Side.UNDER, n_max, limits.allow_large)
    over = qnl_table(n_max, table, params, Side.OVER, n_max, limits.allow_large)
    rows.append(check_block_sums(under, mu_beta, params).row("exists3", True))

    calc = check_measure_bounds([mu_beta, measured.interval])
    if not measured.converged:
        calc.violations += 1
    rows.append(calc.row("calc", True))

    mu_lo: RealInterval = RealInterval.from_dyadic(mu_beta.lo)
    sanity, decomposition, trend = _Tally(), _Tally(), _Tally()
    previous: Optional[float] = None

    for n in range(1, n_max + 1):
        qn: RealInterval = partition_sum_Qn(n, table, params, n_max=n_max, allow_large=limits.allow_large, pool=pool)

        bound: RealInterval = outward_exp(mu_lo * float(-params.beta_weight * n) + LOG_K) * 2.0
        floor: RealInterval = outward_exp(RealInterval(-float((params.beta_weight + params.cusp_coeff) * n)))
        holds: bool = qn.hi <= bound.lo and qn.lo >= floor.hi and qn.hi <= math.ldexp(1.0, n)
        sanity.add(_log_margin(qn.hi, bound.lo), holds)

        split: RealInterval = RealInterval.total(over[(n, parts)] for parts in range(1, n + 1))
        joined: RealInterval = split * outward_exp(RealInterval(LOG_K))
        decomposition.add(_log_margin(qn.hi, joined.lo), qn.hi <= joined.lo)

        if n >= TREND_START:
            value: float = math.log(qn.midpoint()) / n
            if previous is not None:
                trend.add(previous + TREND_SLACK - value, value <= previous + TREND_SLACK)
            previous = value

    rows.append(sanity.row("exist-sanity", True))
    rows.append(decomposition.row("decomposition", True))
    rows.append(trend.row("trend", False))
    rows.append(check_q_coefficients(limits.q_max).row("q-crosscheck", True))

    gap = _Tally()
    alpha_lo: DyadicRational = 1 - mu_beta.hi
    gap.add(float(alpha_lo), alpha_lo > 0)
    rows.append(gap.row("delta-o-gap", True))

    logging.info("lemmas -> %s rows in %.2fs.", len(rows), perf_counter() - started)
    return rows
