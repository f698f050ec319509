from __future__ import annotations

import pytest
from odogibbs import (
    DyadicInterval,
    DyadicRational,
    Family,
    WindowEvent,
    WorkerPool,
    Word,
    derive_seed,
    event_measure,
    monte_carlo_cylinder,
    mu_cylinder,
    nu_A_series,
    sample_point,
)
from odogibbs.enums import Polarity
from odogibbs.measure import birkhoff_frequency, family_measures, fixed_point_measure

TOLERANCE = DyadicRational.power_of_two(-20)
BAND = DyadicInterval(DyadicRational(5, -5), DyadicRational(6, -5))


def test_series_is_exact():
    series = nu_A_series(32)

    assert series == DyadicInterval(DyadicRational(3, -4) - DyadicRational.power_of_two(-32), DyadicRational(3, -4))
    assert nu_A_series(6) == DyadicInterval(DyadicRational(11, -6), DyadicRational(12, -6))
    assert BAND.contains(series)

    with pytest.raises(ValueError):
        nu_A_series(5)


def test_mu_beta_matches_series():
    result = mu_cylinder(Word.beta(1), TOLERANCE)

    assert result.converged
    assert result.interval.width() <= TOLERANCE
    assert result.lo >= BAND.lo
    assert result.hi <= BAND.hi + TOLERANCE

    common = result.interval.intersection(nu_A_series(32))
    assert common is not None and BAND.contains(common)


def test_widest_residue_is_split_first():
    event = WindowEvent([(0, Family.A(), Polarity.IN)])
    result = event_measure(event, TOLERANCE, 40, 4096)

    assert result.converged
    assert result.interval.width() <= TOLERANCE
    assert result.interval.overlaps(nu_A_series(32))
    assert 20 <= result.depth_used < 40


def test_letters_are_complementary():
    beta = mu_cylinder(Word.beta(1), TOLERANCE)
    alpha = mu_cylinder(Word.alpha(1), TOLERANCE)

    assert beta.lo + alpha.lo <= 1 <= beta.hi + alpha.hi


def test_forbidden_word_has_zero_measure():
    result = mu_cylinder(Word.parse("aba"), TOLERANCE)

    assert result.lo == 0
    assert result.hi <= TOLERANCE


def test_empty_event():
    result = event_measure(WindowEvent())

    assert result.interval == DyadicInterval.point(1)
    assert result.depth_used == 0


def test_deeper_cap_never_widens():
    event = WindowEvent.cylinder(Word.parse("abbbbb"))
    tolerance = DyadicRational.power_of_two(-40)

    shallow = event_measure(event, tolerance, 14)
    deep = event_measure(event, tolerance, 18)

    assert shallow.interval.contains(deep.interval)
    assert deep.depth_used <= 18


def test_event_measure_arguments():
    event = WindowEvent.cylinder(Word.beta(1))

    with pytest.raises(ValueError):
        event_measure(event, DyadicRational(0))

    with pytest.raises(ValueError):
        event_measure(event, TOLERANCE, 129)

    with pytest.raises(ValueError):
        event_measure(event, TOLERANCE, 4)


def test_window_event():
    event = WindowEvent.cylinder(Word.parse("ab"))

    assert event.key() == "A@0:out,A@1:in"
    assert event.span == 2
    assert event.shifted(3).key() == "A@3:out,A@4:in"
    assert WindowEvent().span == 0
    assert event == WindowEvent([(1, Family.A(), Polarity.IN), (0, Family.A(), Polarity.OUT)])

    with pytest.raises(ValueError):
        WindowEvent([(0, Family.A(), Polarity.IN), (0, Family.E_k(5), Polarity.OUT)])


def test_family_measures():
    rows = family_measures(8)

    assert [row.k for row in rows] == [5, 6, 7, 8]
    assert rows[0].a_k == DyadicRational(5, -5)
    assert rows[-1].a_k == DyadicRational(47, -8)
    assert rows[0].h_k == DyadicRational(7, -5)
    assert all(row.within_bound and row.converged for row in rows)

    with pytest.raises(ValueError):
        family_measures(4)

    with pytest.raises(ValueError):
        family_measures(50, depth_cap=40)


def test_monte_carlo_is_reproducible():
    word = Word.beta(1)
    serial = monte_carlo_cylinder(word, 400, seed=1)
    parallel = monte_carlo_cylinder(word, 400, seed=1, pool=WorkerPool(4))

    assert serial.estimate == parallel.estimate
    assert serial.discards == 0
    assert abs(serial.estimate - 0.1875) <= 5 * max(serial.standard_error, 0.01)

    with pytest.raises(ValueError):
        monte_carlo_cylinder(word, 0)


def test_birkhoff_frequency():
    point = sample_point(derive_seed(2, 0))

    count, frequency = birkhoff_frequency(point, Word.beta(1), 1 << 12)
    assert count == round(frequency * (1 << 12))
    assert abs(frequency - 0.1875) < 0.01

    assert birkhoff_frequency(point, Word.parse("aba"), 1 << 12) == (0, 0.0)

    with pytest.raises(ValueError):
        birkhoff_frequency(point, Word.beta(1), 0)


def test_fixed_point_measure():
    measure = fixed_point_measure()

    assert measure.cylinder(Word.beta(7)) == 1
    assert measure.cylinder(Word.parse("bba")) == 0
    assert measure.cylinder(Word.alpha(1)).is_zero()
