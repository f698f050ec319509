from __future__ import annotations

import pytest
from odogibbs import DyadicRational
from odogibbs.exceptions import OutOfScope
from odogibbs.thermo import gibbs_ratio_at_o


@pytest.mark.parametrize("n", (5, 6, 8))
def test_gibbs_ratio_grows_past_threshold(n: int):
    report = gibbs_ratio_at_o(n)

    assert report.satisfied
    assert report.beats_uniform
    assert report.measure.converged
    assert report.measure.interval.width() <= DyadicRational.power_of_two(-(n + 8))
    assert report.ratio.lo > report.threshold.hi


def test_gibbs_row():
    row = gibbs_ratio_at_o(6).as_row()

    assert set(row) == {"n", "mu_lo", "mu_hi", "ratio", "threshold", "satisfied", "beats_uniform", "converged"}
    assert row["n"] == 6
    assert row["mu_lo"] <= row["mu_hi"]


def test_threshold_scale_forces_failure():
    report = gibbs_ratio_at_o(6, threshold_scale=1e12)

    assert not report.satisfied
    assert report.beats_uniform


def test_short_words_out_of_scope():
    with pytest.raises(OutOfScope):
        gibbs_ratio_at_o(4)
