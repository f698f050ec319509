from __future__ import annotations

import pytest
from odogibbs import Errors, OdometerPoint, derive_seed, sample_point
from odogibbs.thermo import orbit_structure


@pytest.mark.parametrize("seed", (1, 2, 3))
@pytest.mark.parametrize("k", (5, 7))
def test_seeded_orbits(seed: int, k: int):
    result = orbit_structure(sample_point(derive_seed(seed, 0)), k, 1 << 12)
    assert result.success

    structure = result.unwrap()
    assert structure.starts[0] == 0
    assert len(structure.counts) == len(structure.valuations)
    for start, end, s in zip(structure.starts, structure.starts[1:], structure.valuations):
        assert end - start == 1 << s

    assert structure.increasing_violations == 0
    assert structure.violations == 0
    assert all(frequency <= (k + 2) / 2**k for frequency in structure.frequencies)

    row = structure.as_row(seed)
    assert row["pass"] and row["k"] == k


def test_turn_into_fixed_point():
    result = orbit_structure(OdometerPoint.ones(), 5, 64)

    assert result.success
    assert result.unwrap().shift == 1
    assert result.unwrap().valuations == []
    assert result.unwrap().as_row(0)["max_frequency"] == 0.0


def test_zero_point_has_no_turn():
    result = orbit_structure(OdometerPoint.zero(), 5, 64)

    assert result.failure
    assert result.error == Errors.NoTransition.value


def test_arguments():
    point = sample_point(derive_seed(1, 0))

    with pytest.raises(ValueError):
        orbit_structure(point, 4, 64)

    with pytest.raises(ValueError):
        orbit_structure(point, 5, 1)
