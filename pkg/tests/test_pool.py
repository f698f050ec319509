import pytest
from odogibbs import WorkerPool


@pytest.mark.parametrize("workers", (1, 2, 3, 8))
def test_map_keeps_order(workers: int):
    pool = WorkerPool(workers)
    items = list(range(25))

    assert pool.map(lambda x: x * x, items) == [x * x for x in items]
    assert pool.map_chunks(lambda chunk: [sum(chunk)], items) == [sum(c) for c in pool.chunks(items)]
    assert pool.is_inline() is (workers == 1)


def test_chunks():
    pool = WorkerPool(3)

    assert pool.chunks([1, 2, 3, 4, 5, 6, 7]) == [[1, 2, 3], [4, 5], [6, 7]]
    assert pool.chunks([1]) == [[1]]
    assert pool.chunks([]) == [[]]


def test_errors_reach_the_caller():
    def fail(x: int) -> int:
        if x == 3:
            raise ArithmeticError("three")
        return x

    with pytest.raises(ArithmeticError):
        WorkerPool(2).map(fail, list(range(6)))

    with pytest.raises(ValueError):
        WorkerPool(0)
