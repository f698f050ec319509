from __future__ import annotations

import numpy as np
import pytest
from odogibbs import (
    Family,
    OdometerPoint,
    Residue,
    b_m_count_enumerated,
    derive_seed,
    orbit_letters,
    point_letter,
    q_coefficient,
    sample_point,
    transition_index,
)
from odogibbs.coding import classify, hits, member_A, member_family, phi_letter, phi_window, tail_mass
from odogibbs.enums import FamilyKind, Letter
from odogibbs.exactnum import DyadicRational
from odogibbs.exceptions import InsufficientDepth


def _brute_hits(value: int, lo: int, hi: int) -> bool:
    return any(value % (1 << i) < i for i in range(max(lo, 1), hi + 1))


@pytest.mark.parametrize("hi", (5, 6, 9, 17, 40, 70))
def test_hits_matches_brute_force(hi: int):
    rng = np.random.default_rng(hi)
    values = [int(v) for v in rng.integers(0, 1 << 62, size=200)]
    values += [0, 4, 5, 31, 32, 36, 1 << 40, (1 << 40) + 7, 1 << 61]

    for value in values:
        assert hits(value, 5, hi) == _brute_hits(value, 5, hi)


def test_hits_empty_range():
    assert hits(0, 9, 8) is False


@pytest.mark.parametrize("m", range(6, 19))
def test_q_coefficient_matches_enumeration(m: int):
    assert b_m_count_enumerated(m) == q_coefficient(m)


def test_q_coefficient_limits():
    with pytest.raises(ValueError):
        q_coefficient(5)

    with pytest.raises(ValueError):
        b_m_count_enumerated(31)

    assert b_m_count_enumerated(5) == 5


def test_family_parse():
    assert Family.parse("E_7") == Family.E_k(7)
    assert Family.parse("A") == Family.A()
    assert Family.parse("B_6").kind is FamilyKind.B_M
    assert repr(Family.A_k(9)) == "A_9"
    assert Family.A_k(9).exact_depth() == 9
    assert Family.E_k(9).exact_depth() is None

    with pytest.raises(ValueError):
        Family.parse("C_5")

    with pytest.raises(ValueError):
        Family.A_k(4)


def test_classify():
    assert classify(0, 5, Family.A()).is_in
    assert classify(3, 8, Family.A_k(6)).is_in
    assert classify(40, 8, Family.A_k(6)).is_out

    possible = classify(31, 5, Family.A())
    assert not possible.certain
    assert 0 < possible.mass <= DyadicRational.power_of_two(-20)

    with pytest.raises(InsufficientDepth):
        classify(0, 4, Family.A())

    with pytest.raises(InsufficientDepth):
        classify(0, 5, Family.A_k(8), exact=True)


@pytest.mark.parametrize("depth", (5, 6, 8))
def test_tail_mass_bounds_extensions(depth: int):
    # Fraction of depth 16 extensions that hit a window between depth + 1 and 16.
    for value in range(1 << depth):
        if hits(value, 5, depth):
            continue

        extensions = [value | (upper << depth) for upper in range(1 << (16 - depth))]
        hit = sum(1 for x in extensions if hits(x, max(5, depth + 1), 16))
        assert DyadicRational(hit, depth - 16) <= tail_mass(value, depth, 5)


def test_point_letter_constant_tails():
    assert point_letter(OdometerPoint.zero()) is Letter.BETA
    assert point_letter(OdometerPoint.from_integer(3)) is Letter.BETA
    assert point_letter(OdometerPoint.ones()) is Letter.ALPHA
    assert point_letter(OdometerPoint.from_integer(-(1 << 40))) is Letter.BETA


@pytest.mark.parametrize("seed", (1, 2, 3))
def test_orbit_letters_match_point_letters(seed: int):
    point = sample_point(derive_seed(seed, 0))
    letters = orbit_letters(point, 256)

    expected = [point_letter(point.shift(t)) is Letter.BETA for t in range(256)]
    assert letters.tolist() == expected

    tail = orbit_letters(point, 64, start=100)
    assert tail.tolist() == letters[100:164].tolist()

    shifted = orbit_letters(point, 128, first=8)
    assert shifted.tolist() == [point_letter(point.shift(t), first=8) is Letter.BETA for t in range(128)]


@pytest.mark.parametrize("seed", (4, 5))
def test_beta_runs_are_long(seed: int):
    letters = orbit_letters(sample_point(derive_seed(seed, 1)), 1 << 14).astype(np.int8)
    edges = np.diff(letters)
    starts = np.flatnonzero(edges == 1) + 1
    ends = np.flatnonzero(edges == -1) + 1

    for start in starts:
        later = ends[ends > start]
        if later.size:
            assert later[0] - start >= 5


def test_transition_index():
    point = sample_point(derive_seed(6, 0))
    t = transition_index(point, 1 << 12)

    assert t is not None
    letters = orbit_letters(point, t + 1)
    assert not letters[t - 1] and letters[t]
    assert not np.any(~letters[: t - 1] & letters[1:t])

    assert transition_index(OdometerPoint.zero(), 64) is None


def test_residue_membership():
    assert member_A(Residue(5, 0)).is_in
    assert not member_A(Residue(5, 31)).certain

    assert member_family(Residue(8, 3), Family.A_k(6)).is_in
    assert member_family(Residue(8, 40), Family.A_k(6)).is_out

    with pytest.raises(InsufficientDepth):
        member_family(Residue(5, 0), Family.A_k(8), exact=True)

    with pytest.raises(InsufficientDepth):
        member_A(Residue(4, 0))


def test_phi_letter():
    letter, membership = phi_letter(Residue(5, 0))
    assert letter is Letter.BETA and membership.is_in

    letter, membership = phi_letter(Residue(5, 31))
    assert letter is Letter.ALPHA and not membership.certain


def test_phi_window_around_zero():
    after = phi_window(OdometerPoint.zero(), 0, 3)
    assert [letter for letter, _ in after] == [Letter.BETA] * 4

    before = phi_window(OdometerPoint.zero(), -2, -1)
    assert [letter for letter, _ in before] == [Letter.ALPHA] * 2

    assert phi_window(Residue(12, 0), -1, 1, refine_to=8)[1][0] is Letter.BETA

    with pytest.raises(InsufficientDepth):
        phi_window(OdometerPoint.zero(), 0, 3, refine_to=4)

    with pytest.raises(ValueError):
        phi_window(OdometerPoint.zero(), 3, 0)


def test_phi_window_agrees_with_orbit_letters():
    point = sample_point(derive_seed(7, 0))
    letters = orbit_letters(point, 128)

    for t, (letter, membership) in enumerate(phi_window(point, 0, 127)):
        if membership.is_in:
            assert letters[t]
        assert (letter is Letter.BETA) <= bool(letters[t])
