from __future__ import annotations

import math

import pytest
from odogibbs import DyadicInterval, DyadicRational, Side, build_language
from odogibbs.thermo import LemmaLimits, lemma_report
from odogibbs.thermo.lemmas import check_measure_bounds, check_q_coefficients, check_word_counts

TABLE = build_language(16)


def _interval(lo: int, hi: int, exponent: int) -> DyadicInterval:
    return DyadicInterval(DyadicRational(lo, exponent), DyadicRational(hi, exponent))


def test_limits():
    assert LemmaLimits().q_max <= 30

    for q_max in (5, 31):
        with pytest.raises(ValueError):
            LemmaLimits(q_max=q_max)


def test_measure_bounds_use_the_common_part():
    # The first enclosure pokes past 6/32, the second pins the value inside.
    tally = check_measure_bounds([_interval(160, 197, -10), _interval(184, 192, -10)])

    assert tally.instances == 2
    assert tally.violations == 0
    assert tally.worst == 0.0


def test_measure_bounds_violations():
    disjoint = check_measure_bounds([_interval(0, 1, -8), _interval(2, 4, -3)])
    assert disjoint.violations == 1
    assert disjoint.worst == -math.inf

    outside = check_measure_bounds([_interval(1, 2, -2)])
    assert outside.violations == 1
    assert outside.worst < 0.0


def test_word_counts():
    for side in Side:
        tally = check_word_counts(TABLE, side)
        assert tally.instances == 16
        assert tally.violations == 0


def test_q_coefficients():
    tally = check_q_coefficients(14)

    assert tally.instances == 9
    assert tally.violations == 0


def test_lemma_report():
    limits = LemmaLimits(n_max=6, q_max=12, tolerance=DyadicRational.power_of_two(-20))
    rows = {row.id: row for row in lemma_report(TABLE, limits=limits)}

    assert list(rows) == [
        "exist1",
        "exist1-over",
        "beta-count-l3",
        "beta-count-l4",
        "beta-count-l5",
        "beta-count-l6",
        "exist2",
        "exist2-plus4",
        "exists3",
        "calc",
        "exist-sanity",
        "decomposition",
        "trend",
        "q-crosscheck",
        "delta-o-gap",
    ]

    for id in ("exist1", "exist2", "exists3", "calc", "q-crosscheck", "delta-o-gap"):  # noqa: A001
        assert rows[id].passed and rows[id].gate

    assert rows["beta-count-l5"].instances == 0
    assert rows["trend"].instances == 0
    assert not rows["exist1-over"].gate
    assert set(rows["calc"].as_row()) == {"id", "instances", "worst_margin", "pass", "violations", "gate"}
