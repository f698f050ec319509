from __future__ import annotations

import math

import pytest
from odogibbs import DyadicInterval, DyadicRational, Side, WorkerPool, build_language
from odogibbs.exceptions import CostGuard
from odogibbs.thermo import block_sums, check_cost, partition_sum_Qn, partition_sum_Qnl, pressure, qnl_table

TABLE = build_language(16)


def test_pressure_is_exact():
    expected = DyadicInterval(DyadicRational(-3, -3), DyadicRational(-3, -3) + DyadicRational.power_of_two(-31))

    assert pressure() == expected
    assert pressure().to_real().contains(-0.375)


def test_check_cost():
    check_cost(16)
    check_cost(18, n_max=20, allow_large=True)

    for n, n_max, allow_large in ((17, 16, False), (17, 20, False), (21, 30, True), (10, 8, False)):
        with pytest.raises(CostGuard):
            check_cost(n, n_max, allow_large)


@pytest.mark.parametrize("n", (1, 2, 3, 4))
def test_partition_sum_bounds(n: int):
    value = partition_sum_Qn(n, TABLE)

    assert value.lo > 0.0
    assert value.hi <= math.ldexp(1.0, n) * 1.0001
    assert value.lo >= math.exp(-14.0 * n)


def test_partition_sum_with_pool():
    assert partition_sum_Qn(4, TABLE) == partition_sum_Qn(4, TABLE, pool=WorkerPool(3))


def test_partition_sum_errors():
    with pytest.raises(ValueError):
        partition_sum_Qn(0, TABLE)

    with pytest.raises(CostGuard):
        partition_sum_Qn(17, TABLE)


def test_block_sums():
    sums = block_sums(2, TABLE)
    single = math.exp(-12.0) + math.exp(-14.0)

    assert len(sums) == 3
    assert abs(sums[1].midpoint() - single) <= 1e-12 * single
    assert sums[1].contains(sums[1].midpoint())


def test_block_convolution():
    single = math.exp(-12.0) + math.exp(-14.0)
    value = partition_sum_Qnl(2, 2, TABLE)

    assert abs(value.midpoint() - single * single) <= 1e-12 * single * single
    assert partition_sum_Qnl(3, 1, TABLE) == block_sums(3, TABLE)[3]

    table = qnl_table(4, TABLE, side=Side.OVER)
    assert set(table) == {(k, parts) for k in range(1, 5) for parts in range(1, k + 1)}


def test_block_convolution_errors():
    for l in (0, 4):  # noqa: E741
        with pytest.raises(ValueError):
            partition_sum_Qnl(3, l, TABLE)

    with pytest.raises(CostGuard):
        partition_sum_Qnl(17, 1, TABLE)
