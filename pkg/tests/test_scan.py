from __future__ import annotations

import math

import pytest
from odogibbs import (
    DyadicInterval,
    DyadicRational,
    MeasureResult,
    OdometerPoint,
    RealInterval,
    WorkerPool,
    Word,
    derive_seed,
    sample_point,
)
from odogibbs.exceptions import CostGuard
from odogibbs.thermo import ergodicity_proxy, short_words, very_weak_scan
from odogibbs.thermo.scan import _log_ratio

TOLERANCE = DyadicRational.power_of_two(-16)


def test_zero_point_is_not_generic():
    points = [OdometerPoint.zero(), sample_point(derive_seed(1, 0))]
    report = very_weak_scan(0, ns=(8, 16), tolerance=TOLERANCE, points=points)

    assert report.samples == 2
    assert report.non_generic == [0]
    assert report.discards == 0
    assert [(row.sample, row.n) for row in report.rows] == [(1, 8), (1, 16)]
    assert all(len(row.word) == row.n for row in report.rows)


def test_scan_summary():
    report = very_weak_scan(3, ns=(16, 8), seed=5, tolerance=TOLERANCE)
    summary = report.summary()

    assert report.ns == (8, 16)
    assert summary["kind"] == "aggregate"
    assert summary["samples"] == 3
    assert summary["non_generic"] == 0
    assert set(report.medians) == {8, 16}
    assert 0.0 <= report.decreasing_fraction <= 1.0
    assert len(report.rows) == 2 * (3 - report.discards)

    for row in report.rows:
        assert row.as_row()["kind"] == "sample"
        assert row.measure.lo > 0 or not math.isfinite(row.magnitude)


def test_scan_is_reproducible():
    serial = very_weak_scan(4, ns=(8,), seed=2, tolerance=TOLERANCE)
    parallel = very_weak_scan(4, ns=(8,), seed=2, tolerance=TOLERANCE, pool=WorkerPool(2))

    assert [str(row.word) for row in serial.rows] == [str(row.word) for row in parallel.rows]
    assert [row.measure.interval for row in serial.rows] == [row.measure.interval for row in parallel.rows]


def test_scan_arguments():
    with pytest.raises(ValueError):
        very_weak_scan(0)

    with pytest.raises(ValueError):
        very_weak_scan(2, ns=())

    with pytest.raises(ValueError):
        very_weak_scan(2, ns=(0, 8))


def test_short_words():
    words = short_words()

    assert len(words) == 12
    assert [len(word) for word in words[:4]] == [2, 2, 2, 2]
    assert len({str(word) for word in words}) == 12


def test_ergodicity_proxy():
    words = [Word.beta(1), Word.parse("ab"), Word.parse("bb"), Word.parse("aba")]
    rows = ergodicity_proxy(3, 1 << 12, seed=1, words=words, tolerance=TOLERANCE)

    assert [str(row.word) for row in rows] == ["b", "ab", "bb", "aba"]
    assert all(row.passed and row.instances == 3 and row.discards == 0 for row in rows)
    assert rows[0].as_row()["kind"] == "ergodicity"


def test_ergodicity_proxy_arguments():
    with pytest.raises(ValueError):
        ergodicity_proxy(0)

    with pytest.raises(ValueError):
        ergodicity_proxy(1, 0)


def test_unresolved_samples_count_as_discards():
    report = very_weak_scan(3, ns=(16,), seed=4, tolerance=TOLERANCE, depth_cap=5)
    summary = report.summary()

    assert report.discards == 0
    assert report.unresolved == [0, 1, 2]
    assert len(report.rows) == 3
    assert not any(row.converged for row in report.rows)
    assert report.discard_rate == 1.0
    assert math.isnan(report.medians[16])
    assert report.decreasing_fraction == 0.0
    assert summary["unresolved"] == 3
    assert summary["pass"] is False


def test_scan_window_limit():
    with pytest.raises(CostGuard):
        very_weak_scan(1, ns=(16, 65))


def test_log_ratio_rounds_outward():
    measure = MeasureResult(DyadicInterval(0, DyadicRational(1, -3)), 12, converged=False)
    ratio = _log_ratio(measure, RealInterval(0.0), 1)

    assert ratio.lo == -math.inf
    assert ratio.hi > math.log(0.125)
