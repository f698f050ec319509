from __future__ import annotations

import logging

from threading import Lock
from typing import List, Optional, Sequence

from .config import RunConfig
from .exactnum import DyadicInterval
from .language import LanguageTable, Word, build_language
from .measure import MeasureResult, WindowEvent, event_measure, mu_cylinder, nu_A_series
from .odometer import OdometerPoint
from .pool import WorkerPool
from .result import Result
from .thermo import (
    GibbsReport,
    LemmaLimits,
    LemmaRow,
    OrbitStructure,
    PotentialParams,
    ProxyRow,
    ScanReport,
    ergodicity_proxy,
    gibbs_ratio_at_o,
    lemma_report,
    orbit_structure,
    pressure,
    very_weak_scan,
)


class Session:
    """
    Runs computations under one configuration and keeps the expensive shared pieces.

    The language table, the ``μ(⟦β⟧)`` enclosure and the ``ν(A)`` series are built on first use
    and reused by every later call. THREAD SAFE.

    Parameters
    ----------
    config:
        Run settings, defaults when omitted.
    params:
        Potential constants, defaults when omitted.
    table:
        A prebuilt language table, for instance one read back from files.

    Attributes
    ----------
    pool:
        The worker pool sized by ``config.workers``.
    """

    __slots__ = ("config", "params", "pool", "_lock", "_table", "_series", "_mu_beta")

    def __init__(
        self,
        config: Optional[RunConfig] = None,
        params: Optional[PotentialParams] = None,
        table: Optional[LanguageTable] = None,
    ) -> None:
        self.config: RunConfig = config or RunConfig()
        self.params: PotentialParams = params or PotentialParams()
        self.pool: WorkerPool = WorkerPool(self.config.workers)

        self._lock: Lock = Lock()
        self._table: Optional[LanguageTable] = table
        self._series: Optional[DyadicInterval] = None
        self._mu_beta: Optional[MeasureResult] = None

    def __repr__(self) -> str:
        return f"<Session(config={self.config}, table_built={self._table is not None})>"

    def table(self) -> LanguageTable:
        """The language table for ``max_len`` and ``depth``, built once."""
        with self._lock:
            if self._table is None:
                self._table = build_language(self.config.max_len, self.config.depth, self.pool)
            return self._table

    def series(self) -> DyadicInterval:
        """``ν(A)`` from ``series_terms`` terms of its exact series."""
        with self._lock:
            if self._series is None:
                self._series = nu_A_series(self.config.series_terms)
            return self._series

    def mu_beta(self) -> MeasureResult:
        """``μ(⟦β⟧)`` by adaptive refinement, independent of the series."""
        with self._lock:
            if self._mu_beta is None:
                self._mu_beta = mu_cylinder(Word.beta(1), self.config.tolerance, self.config.depth_cap)
                logging.info("session -> mu(b) enclosed in %s.", self._mu_beta.interval)
            return self._mu_beta

    def measure(self, word: Word) -> MeasureResult:
        return mu_cylinder(word, self.config.tolerance, self.config.depth_cap)

    def event(self, event: WindowEvent) -> MeasureResult:
        return event_measure(event, self.config.tolerance, self.config.depth_cap)

    def pressure(self) -> DyadicInterval:
        return pressure(self.params, self.config.series_terms)

    def gibbs(self, n: int) -> GibbsReport:
        return gibbs_ratio_at_o(
            n,
            self.params,
            self.config.tolerance,
            self.config.depth_cap,
            self.config.series_terms,
            self.config.threshold_scale,
        )

    def scan(self, ns: Sequence[int], points: Optional[Sequence[OdometerPoint]] = None) -> ScanReport:
        return very_weak_scan(
            self.config.samples,
            ns,
            self.config.seed,
            self.config.tolerance,
            self.config.depth_cap,
            self.params,
            self.config.series_terms,
            self.config.scan_limit,
            self.pool,
            points,
        )

    def proxy(self, samples: int, steps: int) -> List[ProxyRow]:
        return ergodicity_proxy(
            samples, steps, self.config.seed, None, self.config.tolerance, self.config.depth_cap, self.config.scan_limit
        )

    def orbit(self, point: OdometerPoint, k: int, horizon: int) -> Result[OrbitStructure]:
        return orbit_structure(point, k, horizon, self.config.scan_limit)

    def lemmas(self) -> List[LemmaRow]:
        limits = LemmaLimits(
            self.config.n_max,
            self.config.allow_large,
            self.config.series_terms,
            self.config.tolerance,
            self.config.depth_cap,
        )
        return lemma_report(self.table(), self.params, limits, self.pool)
