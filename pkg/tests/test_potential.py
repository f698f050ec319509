from __future__ import annotations

import pytest
from odogibbs import Word, build_language
from odogibbs.exceptions import InsufficientWindow
from odogibbs.thermo import ExtensionConvention, PotentialParams, birkhoff_psi, psi_at, psi_terms, window_radius

TABLE = build_language(16)


def test_params():
    params = PotentialParams()

    assert params.key() == (2, 12.0, 0.5, 5)
    assert params.min_window == 11
    assert params == PotentialParams(2, 12.0, 0.5, 5)
    assert params.cusp(float("inf")).lo == 0.0
    assert params.cusp(4.0).contains(6.0)

    with pytest.raises(ValueError):
        PotentialParams(beta_weight=0)


def test_marker_window():
    marker = ExtensionConvention.marker()

    assert str(marker.window(Word.parse("bb"), 0, 2)) == "aabba"
    assert ExtensionConvention.fixed_point().kind == "fixed_point"

    with pytest.raises(ValueError):
        ExtensionConvention("mirror")


def test_on_subshift():
    fixed = ExtensionConvention.fixed_point()

    assert fixed.on_subshift(Word.beta(9))
    assert not fixed.on_subshift(Word.parse("bab"))
    assert not ExtensionConvention.marker().on_subshift(Word.beta(9))


@pytest.mark.parametrize("n", (1, 5, 12, 40))
def test_birkhoff_at_fixed_point(n: int):
    value = birkhoff_psi(Word.beta(n), ExtensionConvention.fixed_point())

    assert value.lo == value.hi == -2.0 * n


def test_birkhoff_needs_table():
    with pytest.raises(ValueError):
        birkhoff_psi(Word.parse("ab"))

    value = birkhoff_psi(Word.parse("ab"), table=TABLE)
    assert value.hi <= 0.0
    assert len(psi_terms(Word.parse("ab"), ExtensionConvention.marker(), TABLE, PotentialParams())) == 2


def test_psi_at():
    assert psi_at(Word.beta(11), TABLE, on_subshift=True).lo == -2.0

    value = psi_at(Word.beta(11), TABLE)
    assert value.contains(-2.0)
    assert value.lo < -2.0

    for length in (9, 12):
        with pytest.raises(InsufficientWindow):
            psi_at(Word.beta(length), TABLE)


def test_window_radius():
    assert window_radius(TABLE) == 7
    assert window_radius(build_language(32)) == 15
