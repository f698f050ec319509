from __future__ import annotations

from pathlib import Path

import pytest
from odogibbs import DyadicRational, RunConfig
from odogibbs.exceptions import UsageError


def test_defaults():
    config = RunConfig()

    assert config.tolerance == DyadicRational.power_of_two(-24)
    assert config.depth_cap == 40
    assert config.n_max == 16
    assert config.allow_large is False
    assert config == RunConfig(**config.as_dict())


def test_update_parses_text():
    config = RunConfig(tolerance="2^-30", allow_large="yes", seed="7", threshold_scale="0.5")

    assert config.tolerance == DyadicRational.power_of_two(-30)
    assert config.allow_large is True
    assert config.seed == 7
    assert config.threshold_scale == 0.5


@pytest.mark.parametrize(
    "values",
    [
        {"colour": "red"},
        {"tolerance": "0"},
        {"tolerance": "0.1"},
        {"depth_cap": "4"},
        {"depth_cap": "129"},
        {"samples": "0"},
        {"allow_large": "maybe"},
        {"threshold_scale": "-1"},
        {"workers": "many"},
    ],
)
def test_bad_values(values: dict):
    with pytest.raises(UsageError):
        RunConfig(**values)


def test_parse():
    text = "# run settings\nmax-len = 32\n\nseed=3  # fixed\n"

    assert RunConfig.parse(text) == {"max_len": "32", "seed": "3"}

    with pytest.raises(UsageError):
        RunConfig.parse("max_len 32")


def test_load(tmp_path: Path):
    path = tmp_path / "run.cfg"
    path.write_text("n_max=12\ntolerance=2^-20\n")

    config = RunConfig.load(path)
    assert config.n_max == 12
    assert config.tolerance == DyadicRational.power_of_two(-20)

    with pytest.raises(UsageError):
        RunConfig.load(tmp_path / "missing.cfg")
