from __future__ import annotations

import math

import pytest
from odogibbs import BitStream, OdometerPoint, Residue, derive_seed, sample_point
from odogibbs.enums import Tail
from odogibbs.exceptions import InsufficientDepth


def test_residue():
    residue = Residue(4, 0b1011)

    assert residue.dn(2) == 0b11
    assert residue.bit(2) == 0
    assert residue.step(1) == Residue(4, 0b1100)
    assert Residue(4, 0).step(-1) == Residue(4, 15)
    assert residue.refine(1) == Residue(5, 0b11011)
    assert residue.children() == (Residue(5, 0b1011), Residue(5, 0b11011))
    assert residue.truncate(2) == Residue(2, 0b11)

    with pytest.raises(InsufficientDepth) as info:
        residue.dn(5)
    assert info.value.needed == 5

    with pytest.raises(ValueError):
        Residue(3, 8)


def test_bit_stream_order_independent():
    first = BitStream(1234)
    second = BitStream(1234)

    assert second.bit(1000) in (0, 1)
    assert first.bits(0, 40) == second.bits(0, 40)
    assert first.bits(10, 20) == (first.bits(0, 40) >> 10) & ((1 << 20) - 1)
    assert first.materialized == BitStream.BLOCK
    assert first.bits(5, 0) == 0


def test_derive_seed():
    seeds = {derive_seed(7, index) for index in range(50)}

    assert len(seeds) == 50
    assert derive_seed(7, 3) == derive_seed(7, 3)
    assert derive_seed(7, 3) != derive_seed(8, 3)


@pytest.mark.parametrize("value", (0, 1, 5, 12, 1023, -1, -6))
def test_integer_points(value: int):
    point = OdometerPoint.from_integer(value)

    assert point.dn(16) == value % (1 << 16)
    assert point.shift(-value).is_zero()


def test_constant_tails():
    assert OdometerPoint.zero().kappa() == math.inf
    assert OdometerPoint.ones().kappa() == 0
    assert OdometerPoint.ones().shift(1).is_zero()
    assert OdometerPoint.from_integer(12).kappa() == 2
    assert OdometerPoint.from_integer(-1).tail is Tail.ONES

    point = OdometerPoint.from_bits([0, 0, 0, 1])
    assert point.run_length(0, 0) == 3
    assert point.run_length(4, 0) == math.inf
    assert point.run_length(3, 1) == 1


@pytest.mark.parametrize("t", (1, 5, 64, 1000, -1, -77, (1 << 70) + 3))
def test_seeded_shift(t: int):
    point = sample_point(derive_seed(11, 0))
    moved = point.shift(t)

    for k in (1, 8, 32, 64):
        assert moved.dn(k) == (point.dn(k) + t) % (1 << k)

    assert moved.shift(-t).dn(128) == point.dn(128)


def test_sample_point_deterministic():
    first = sample_point(derive_seed(3, 9))
    second = sample_point(derive_seed(3, 9))

    assert first.dn(300) == second.dn(300)
    assert first.tail is Tail.SEEDED
    assert not first.is_zero()

    prefix = first.dn(64)
    if prefix:
        assert first.kappa() == (prefix & -prefix).bit_length() - 1
