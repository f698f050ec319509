from __future__ import annotations

from threading import Thread
import logging as logger

from typing import Any, Callable, Dict, List, Optional, Sequence, TypeVar
from typing_extensions import ParamSpec

Param = ParamSpec("Param")
T = TypeVar("T")
R = TypeVar("R")


class WorkerPool:
    """
    A pool of worker threads for data-parallel maps.

    Work is split into contiguous chunks, one thread per chunk, and results are concatenated
    in input order, so the output never depends on scheduling.

    Parameters
    ----------
    workers:
        The number of worker threads. 1 runs everything in the calling thread.
    """

    __slots__ = ("_workers",)

    def __init__(self, workers: int = 1) -> None:
        if workers < 1:
            raise ValueError("A worker pool needs at least one worker.")

        self._workers: int = workers

    def __repr__(self) -> str:
        return f"<WorkerPool(workers={self._workers})>"

    @property
    def workers(self) -> int:
        """The number of worker threads."""
        return self._workers

    def is_inline(self) -> bool:
        """True if the pool runs in the calling thread."""
        return self._workers == 1

    def chunks(self, items: Sequence[T]) -> List[Sequence[T]]:
        """Splits items into at most ``workers`` contiguous, nearly equal chunks."""
        count: int = min(self._workers, len(items))
        if count <= 1:
            return [items]

        size, extra = divmod(len(items), count)
        bounds: List[int] = [0]
        for index in range(count):
            bounds.append(bounds[-1] + size + (1 if index < extra else 0))

        return [items[bounds[i] : bounds[i + 1]] for i in range(count)]

    def map_chunks(self, func: Callable[[Sequence[T]], List[R]], items: Sequence[T]) -> List[R]:
        """
        Applies ``func`` to every chunk and concatenates the results in input order.

        Parameters
        ----------
        func:
            A function mapping a chunk of items to a list of results.
        items:
            The items to process.

        Raises
        ------
        Exception
            The first exception raised by a worker, re-raised in the calling thread.
        """
        parts: List[Sequence[T]] = self.chunks(items)
        if len(parts) <= 1:
            return list(func(items))

        logger.debug("Running %s chunks on %s workers.", len(parts), self._workers)

        results: List[Optional[List[R]]] = [None] * len(parts)
        errors: Dict[int, BaseException] = {}

        def runner(index: int, chunk: Sequence[T]) -> None:
            try:
                results[index] = list(func(chunk))
            except BaseException as exception:  # noqa: B902
                errors[index] = exception

        threads: List[Thread] = [self.run_in_thread(runner, i, part) for i, part in enumerate(parts)]

        for thread in threads:
            # Waiting for all threads.
            thread.join()

        if errors:
            raise errors[min(errors)]

        merged: List[R] = []
        for part in results:
            merged.extend(part or [])
        return merged

    def map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Applies ``func`` to every item, preserving order."""
        return self.map_chunks(lambda chunk: [func(item) for item in chunk], items)

    @staticmethod
    def run_in_thread(func: Callable[Param, Any], *args: Param.args, **kwargs: Param.kwargs) -> Thread:
        """
        Method to run function in thread.

        Parameters
        ----------
        func:
            A function to run in the thread.
        args:
            Function args.
        kwargs:
            Function kwargs.
        """
        thread: Thread = Thread(target=func, args=args, kwargs=kwargs)
        thread.start()
        return thread
