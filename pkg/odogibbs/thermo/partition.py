from __future__ import annotations

import logging

from time import perf_counter
from typing import Dict, List, Optional, Sequence, Tuple

from ..enums import Errors, Side
from ..exactnum import DyadicInterval, RealInterval, outward_exp
from ..exceptions import CostGuard
from ..language import LanguageTable, Word
from ..measure import nu_A_series
from ..pool import WorkerPool
from .potential import ExtensionConvention, PotentialParams, psi_terms

# Exhaustive enumeration limits, without and with the explicit override.
N_MAX: int = 16
N_MAX_LARGE: int = 20


def check_cost(n: int, n_max: int = N_MAX, allow_large: bool = False) -> None:
    """
    Refuses enumerations of ``2**n`` words past the configured limit.

    Raises
    ------
    CostGuard
        ``n`` exceeds ``n_max``, or the hard limit of 16 (20 with ``allow_large``).
    """
    limit: int = min(n_max, N_MAX_LARGE if allow_large else N_MAX)
    if n > limit:
        raise CostGuard(Errors.cost_guard(n, limit))


def _word_terms(
    masks: Sequence[int], n: int, ext: ExtensionConvention, table: LanguageTable, params: PotentialParams
) -> List[RealInterval]:
    return [outward_exp(RealInterval.total(psi_terms(Word(n, mask), ext, table, params))) for mask in masks]


def partition_sum_Qn(  # noqa: N802
    n: int,
    table: LanguageTable,
    params: Optional[PotentialParams] = None,
    ext: Optional[ExtensionConvention] = None,
    n_max: int = N_MAX,
    allow_large: bool = False,
    pool: Optional[WorkerPool] = None,
) -> RealInterval:
    """
    Encloses ``Q_n = Σ exp(S_nψ(z_W))`` over all ``2**n`` words, completed by ``ext``.

    Raises
    ------
    CostGuard
        ``n`` is past the enumeration limit.
    """
    if n < 1:
        raise ValueError("n must be positive.")
    check_cost(n, n_max, allow_large)

    params = params or PotentialParams()
    ext = ext or ExtensionConvention.marker()
    workers: WorkerPool = pool or WorkerPool(1)

    started: float = perf_counter()
    terms: List[RealInterval] = workers.map_chunks(
        lambda masks: _word_terms(masks, n, ext, table, params), list(range(1 << n))  # type: ignore
    )
    total: RealInterval = RealInterval.total(terms)

    logging.debug("partition -> Q_%s = %s in %.2fs.", n, total, perf_counter() - started)
    return total


def block_sums(
    n: int, table: LanguageTable, params: Optional[PotentialParams] = None, side: Side = Side.UNDER
) -> List[RealInterval]:
    """
    ``A(m) = Σ exp(-beta_weight * βcount(W) - cusp_coeff * m**cusp_exp)`` over words of length
    ``m`` on one side of the table, for ``m = 1..n``. Index 0 is unused.
    """
    params = params or PotentialParams()
    sums: List[RealInterval] = [RealInterval(0.0)]

    for m in range(1, n + 1):
        counts: Dict[int, int] = {}
        for mask in table.masks(m, side):
            beta: int = bin(mask).count("1")
            counts[beta] = counts.get(beta, 0) + 1

        cusp: RealInterval = RealInterval(params.cusp_coeff) * RealInterval(float(m)).power(params.cusp_exp)
        terms: List[RealInterval] = [
            outward_exp(RealInterval(-float(params.beta_weight * beta)) - cusp) * float(count)
            for beta, count in sorted(counts.items())
        ]
        sums.append(RealInterval.total(terms))

    return sums


def qnl_table(
    n: int,
    table: LanguageTable,
    params: Optional[PotentialParams] = None,
    side: Side = Side.UNDER,
    n_max: int = N_MAX,
    allow_large: bool = False,
) -> Dict[Tuple[int, int], RealInterval]:
    """
    Every ``Q_k^l`` with ``1 <= l <= k <= n``, by convolution of the block sums.

    ``Q_k^1 = A(k)`` and ``Q_k^l = Σ A(m) Q_{k-m}^{l-1}``.
    """
    check_cost(n, n_max, allow_large)
    blocks: List[RealInterval] = block_sums(n, table, params, side)

    values: Dict[Tuple[int, int], RealInterval] = {(k, 1): blocks[k] for k in range(1, n + 1)}
    for parts in range(2, n + 1):
        for k in range(parts, n + 1):
            values[(k, parts)] = RealInterval.total(
                blocks[m] * values[(k - m, parts - 1)] for m in range(1, k - parts + 2)
            )
    return values


def partition_sum_Qnl(  # noqa: N802
    n: int,
    l: int,  # noqa: E741
    table: LanguageTable,
    params: Optional[PotentialParams] = None,
    side: Side = Side.UNDER,
    n_max: int = N_MAX,
    allow_large: bool = False,
) -> RealInterval:
    """
    Encloses ``Q_n^l``, the sum over compositions ``n_1 + .. + n_l = n`` of the products of
    block sums.

    Block words come from the under side by default, whose words are realized by coded points,
    so ``S_mψ0`` is exactly ``-beta_weight`` times the β count.

    Raises
    ------
    ValueError
        Unless ``1 <= l <= n``.
    CostGuard
        ``n`` is past the enumeration limit.
    """
    if not 1 <= l <= n:
        raise ValueError("Q_n^l needs 1 <= l <= n.")
    return qnl_table(n, table, params, side, n_max, allow_large)[(n, l)]


def pressure(params: Optional[PotentialParams] = None, series_terms: int = 32) -> DyadicInterval:
    """
    ``P(ψ) = -beta_weight * μ(⟦β⟧)``, exact dyadic from the ``ν(A)`` series.

    Use :meth:`~odogibbs.exactnum.DyadicInterval.to_real` for a floating view.
    """
    params = params or PotentialParams()
    return nu_A_series(series_terms).scale(-params.beta_weight)
