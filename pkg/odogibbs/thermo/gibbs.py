from __future__ import annotations

import logging

from typing import Any, Dict, Optional

from ..coding import MIN_RUN
from ..enums import Errors
from ..exactnum import DyadicInterval, DyadicRational, RealInterval, outward_exp
from ..exceptions import OutOfScope
from ..language import Word
from ..measure import DEFAULT_DEPTH_CAP, DEFAULT_TOLERANCE, MeasureResult, mu_cylinder
from .partition import pressure
from .potential import ExtensionConvention, PotentialParams, birkhoff_psi


class GibbsReport:
    """
    The Gibbs ratio of ``⟦β^n⟧`` at the fixed point ``o``.

    Attributes
    ----------
    n:
        Word length.
    ratio:
        Encloses ``μ(⟦β^n⟧) / exp(-nP(ψ) + S_nψ(o))``.
    threshold:
        Encloses ``threshold_scale * (e/2)**n``.
    satisfied:
        ``ratio.lo > threshold.hi``.
    measure:
        The cylinder measure used in the ratio.
    """

    __slots__ = ("n", "ratio", "threshold", "satisfied", "measure")

    def __init__(self, n: int, ratio: RealInterval, threshold: RealInterval, measure: MeasureResult) -> None:
        self.n: int = n
        self.ratio: RealInterval = ratio
        self.threshold: RealInterval = threshold
        self.satisfied: bool = ratio.lo > threshold.hi
        self.measure: MeasureResult = measure

    def __repr__(self) -> str:
        return f"<GibbsReport(n={self.n}, ratio={self.ratio}, threshold={self.threshold}, satisfied={self.satisfied})>"

    @property
    def beats_uniform(self) -> bool:
        """``μ(⟦β^n⟧) > 2**-n``, exactly."""
        return self.measure.lo > DyadicRational.power_of_two(-self.n)

    def as_row(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "mu_lo": self.measure.lo,
            "mu_hi": self.measure.hi,
            "ratio": self.ratio,
            "threshold": self.threshold,
            "satisfied": self.satisfied,
            "beats_uniform": self.beats_uniform,
            "converged": self.measure.converged,
        }


def gibbs_ratio_at_o(
    n: int,
    params: Optional[PotentialParams] = None,
    tolerance: DyadicRational = DEFAULT_TOLERANCE,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    series_terms: int = 32,
    threshold_scale: float = 1.0,
) -> GibbsReport:
    """
    Compares ``μ(⟦β^n⟧) / exp(-nP(ψ) + S_nψ(o))`` with ``(e/2)**n``.

    ``o`` lies in the subshift, so ``S_nψ(o) = -beta_weight * n`` exactly. The cylinder is measured
    to within ``min(tolerance, 2**-(n + 8))`` so the comparison with ``2**-n`` can be strict.

    Parameters
    ----------
    threshold_scale:
        Multiplies the threshold. Values far above 1 force a failed report.

    Raises
    ------
    OutOfScope
        ``n < 5``.
    """
    if n < MIN_RUN:
        raise OutOfScope(Errors.out_of_scope("n", n, MIN_RUN))

    params = params or PotentialParams()
    word: Word = Word.beta(n)

    precision: DyadicRational = min(tolerance, DyadicRational.power_of_two(-(n + 8)))
    measure: MeasureResult = mu_cylinder(word, precision, depth_cap)

    birkhoff: RealInterval = birkhoff_psi(word, ExtensionConvention.fixed_point(), None, params)
    level: DyadicInterval = pressure(params, series_terms)
    exponent: RealInterval = birkhoff - level.to_real() * float(n)

    ratio: RealInterval = measure.interval.to_real() / outward_exp(exponent)

    growth: RealInterval = RealInterval(1.0) - RealInterval(2.0).log()
    threshold: RealInterval = outward_exp(growth * float(n)) * float(threshold_scale)

    report = GibbsReport(n, ratio, threshold, measure)
    logging.debug("gibbs -> n=%s ratio=%s threshold=%s.", n, ratio, threshold)
    return report
