from __future__ import annotations

import sys

from fractions import Fraction

import mpmath
import pytest
from odogibbs import DyadicInterval, DyadicRational, RealInterval
from odogibbs.exactnum import dyadic_arith
from odogibbs.exceptions import RangeExceeded


@pytest.mark.parametrize(
    "text,mantissa,exponent",
    [
        ("5*2^-5", 5, -5),
        ("2^-24", 1, -24),
        ("-2^-3", -1, -3),
        ("3/64", 3, -6),
        ("6/64", 3, -5),
        ("40", 5, 3),
        ("0", 0, 0),
        ("0*2^-9", 0, 0),
    ],
)
def test_parse(text: str, mantissa: int, exponent: int):
    value = DyadicRational.parse(text)

    assert value.mantissa == mantissa
    assert value.exponent == exponent


@pytest.mark.parametrize("text", ("3/5", "1.5", "2^x", "", "1/0"))
def test_parse_rejects(text: str):
    with pytest.raises(ValueError):
        DyadicRational.parse(text)


@pytest.mark.parametrize(
    "value,rendered",
    [
        (DyadicRational(5, -5), "5*2^-5"),
        (DyadicRational.power_of_two(-24), "2^-24"),
        (DyadicRational(-1, -3), "-2^-3"),
        (DyadicRational(3, 2), "12"),
        (DyadicRational(0, 17), "0"),
        (DyadicRational(1, 100), "2^100"),
    ],
)
def test_render(value: DyadicRational, rendered: str):
    assert value.render() == rendered
    assert DyadicRational.parse(rendered) == value


def test_canonical_form():
    assert DyadicRational(12, -4) == DyadicRational(3, -2)
    assert DyadicRational(12, -4).mantissa == 3
    assert DyadicRational(0, 9).exponent == 0
    assert hash(DyadicRational(8)) == hash(DyadicRational(1, 3))
    assert DyadicRational.from_int(-12) == DyadicRational(-3, 2)


def test_arithmetic():
    a = DyadicRational(3, -5)
    b = DyadicRational(5, -6)

    assert a + b == DyadicRational(11, -6)
    assert a - b == DyadicRational(1, -6)
    assert a * b == DyadicRational(15, -11)
    assert 1 - a == DyadicRational(29, -5)
    assert a + 0 == a
    assert -a == DyadicRational(-3, -5)
    assert abs(-a) == a

    assert dyadic_arith(a, b, "cmp") == 1
    assert dyadic_arith(b, a, "cmp") == -1
    assert dyadic_arith(a, a, "sub") == 0

    with pytest.raises(ValueError):
        dyadic_arith(a, b, "div")


def test_compare_far_exponents():
    tiny = DyadicRational.power_of_two(-1000)

    assert tiny < DyadicRational.power_of_two(-999)
    assert -tiny < 0 < tiny
    assert DyadicRational(3, -5) > DyadicRational(5, -6)
    assert sorted([DyadicRational(1), tiny, -tiny]) == [-tiny, tiny, DyadicRational(1)]


def test_rounding():
    value = DyadicRational(7, -3)

    assert value.floor_to(-1) == DyadicRational(1, -1)
    assert value.ceil_to(-1) == DyadicRational(1)
    assert value.floor_to(-5) == value
    assert DyadicRational(-1, -100).floor_to(0) == -1
    assert DyadicRational(1, -100).floor_to(0) == 0
    assert DyadicRational(1, -100).ceil_to(0) == 1


def test_conversions():
    assert float(DyadicRational(5, -5)) == 0.15625
    assert int(DyadicRational(7, -1)) == 3
    assert DyadicRational(5, -5).to_fraction() == Fraction(5, 32)
    assert float(DyadicRational.power_of_two(-2000)) == 0.0

    with pytest.raises(RangeExceeded):
        float(DyadicRational.power_of_two(2000))

    with pytest.raises(ValueError):
        DyadicRational.from_fraction(Fraction(1, 3))


def test_float_conversion_at_the_binary64_edge():
    assert float(DyadicRational((1 << 53) - 1, 971)) == sys.float_info.max
    assert float(-DyadicRational((1 << 53) - 1, 971)) == -sys.float_info.max

    for value in (DyadicRational.power_of_two(1024), DyadicRational(3, 1023), DyadicRational((1 << 54) - 1, 970)):
        with pytest.raises(RangeExceeded):
            float(value)


def test_interval_operations():
    left = DyadicInterval(-1, 2)
    right = DyadicInterval(3, 4)

    assert left * right == DyadicInterval(-4, 8)
    assert left + right == DyadicInterval(2, 6)
    assert left - right == DyadicInterval(-5, -1)
    assert right.scale(-1) == DyadicInterval(-4, -3)
    assert right.width() == 1
    assert right.midpoint() == DyadicRational(7, -1)

    assert left.contains(0)
    assert not left.contains(right)
    assert left.hull(right) == DyadicInterval(-1, 4)
    assert left.intersection(right) is None
    assert left.intersection(DyadicInterval(1, 3)) == DyadicInterval(1, 2)

    with pytest.raises(ValueError):
        DyadicInterval(1, 0)


def test_interval_to_real():
    interval = DyadicInterval("5*2^-5", "3*2^-4")
    view = interval.to_real()

    assert view.lo <= 0.15625 <= view.hi
    assert view.lo <= 0.1875 <= view.hi
    assert DyadicInterval(0).to_real() == RealInterval(0.0)


@pytest.mark.parametrize("x", (-30.0, -1.0, 0.0, 0.5, 1.5, 20.0, 700.0))
def test_exp_encloses(x: float):
    mpmath.mp.dps = 50
    enclosure = RealInterval(x).exp()
    exact = mpmath.exp(mpmath.mpf(x))

    assert mpmath.mpf(enclosure.lo) <= exact <= mpmath.mpf(enclosure.hi)
    assert enclosure.width() <= 8 * abs(float(exact)) * 2.0**-52


@pytest.mark.parametrize("x", (1e-10, 0.5, 2.0, 1e10))
def test_log_encloses(x: float):
    mpmath.mp.dps = 50
    enclosure = RealInterval(x).log()
    exact = mpmath.log(mpmath.mpf(x))

    assert mpmath.mpf(enclosure.lo) <= exact <= mpmath.mpf(enclosure.hi)


def test_range_errors():
    with pytest.raises(RangeExceeded) as info:
        RealInterval(710.0).exp()
    assert info.value.direction == "up"

    with pytest.raises(RangeExceeded) as info:
        RealInterval(0.0, 1.0).log()
    assert info.value.direction == "down"


def test_real_interval_arithmetic():
    a = RealInterval(1.0, 2.0)
    b = RealInterval(-3.0, 0.5)

    assert (a + b).contains(RealInterval(-2.0, 2.5))
    assert (a * b).contains(RealInterval(-6.0, 1.0))
    assert (a / 4.0).contains(RealInterval(0.25, 0.5))
    assert RealInterval.total([a, a, a]).contains(RealInterval(3.0, 6.0))
    assert RealInterval(4.0).sqrt().contains(2.0)
    assert b.certainly_below(RealInterval(1.0))

    with pytest.raises(ZeroDivisionError):
        a / b

    with pytest.raises(ValueError):
        RealInterval(float("nan"))
