import pytest
from odogibbs import DepthSchedule


@pytest.mark.parametrize("initial", (1, 2, 5, 64, 100))
def test_schedule(initial: int):
    schedule = DepthSchedule(initial, 4, 256)

    assert schedule.current == 0
    assert schedule.steps == 0

    depths = list(schedule)
    assert depths[0] == min(initial, 256)
    assert depths[-1] == 256
    assert all(b == min(a * 4, 256) for a, b in zip(depths, depths[1:]))
    assert schedule.exhausted
    assert schedule.steps == len(depths)

    schedule.reset()
    assert schedule.current == 0
    assert schedule.steps == 0
    assert schedule.next == min(initial, 256)


def test_schedule_arguments():
    with pytest.raises(ValueError):
        DepthSchedule(0, 4, 10)

    with pytest.raises(ValueError):
        DepthSchedule(4, 1, 10)

    assert list(DepthSchedule(64, 4, 10)) == [10]
