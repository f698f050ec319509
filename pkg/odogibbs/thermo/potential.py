from __future__ import annotations

import math

from functools import lru_cache
from typing import List, Optional, Tuple

from ..enums import Errors
from ..exactnum import RealInterval
from ..exceptions import InsufficientWindow
from ..language import LanguageTable, Word, radius_bounds


class PotentialParams:
    """
    Constants of the potential ``ψ = ψ0 + ψ1``.

    ``ψ0`` is ``-beta_weight`` on ``⟦β⟧`` and 0 on ``⟦α⟧``. ``ψ1`` is ``-cusp_coeff / r**cusp_exp`` at
    distance ``2**-r`` from the subshift and 0 on it.

    Raises
    ------
    ValueError
        A parameter is not positive.
    """

    __slots__ = ("beta_weight", "cusp_coeff", "cusp_exp", "min_run")

    def __init__(self, beta_weight: int = 2, cusp_coeff: float = 12.0, cusp_exp: float = 0.5, min_run: int = 5) -> None:
        if beta_weight <= 0 or cusp_coeff <= 0 or cusp_exp <= 0 or min_run <= 0:
            raise ValueError("Potential parameters must be positive.")

        self.beta_weight: int = beta_weight
        self.cusp_coeff: float = float(cusp_coeff)
        self.cusp_exp: float = float(cusp_exp)
        self.min_run: int = min_run

    def __repr__(self) -> str:
        return (
            f"<PotentialParams(beta_weight={self.beta_weight}, cusp_coeff={self.cusp_coeff}, "
            f"cusp_exp={self.cusp_exp}, min_run={self.min_run})>"
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PotentialParams):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> Tuple[int, float, float, int]:
        return self.beta_weight, self.cusp_coeff, self.cusp_exp, self.min_run

    @property
    def min_window(self) -> int:
        """Shortest window that resolves the potential, ``2 * min_run + 1``."""
        return 2 * self.min_run + 1

    def cusp(self, radius: float) -> RealInterval:
        """Encloses ``cusp_coeff / radius**cusp_exp``, 0 for an unbounded radius."""
        return _cusp(self.cusp_coeff, self.cusp_exp, radius)

    def psi1(self, r_lower: int, r_upper: float) -> RealInterval:
        """``ψ1`` for a radius known to lie in ``[r_lower, r_upper]``."""
        return RealInterval(-self.cusp(r_lower).hi, -self.cusp(r_upper).lo)


@lru_cache(maxsize=4096)
def _cusp(coeff: float, exponent: float, radius: float) -> RealInterval:
    if math.isinf(radius):
        return RealInterval(0.0)
    return RealInterval(coeff) / RealInterval(float(radius)).power(exponent)


class ExtensionConvention:
    """
    Completes a finite word to a two-sided point.

    ``marker()`` puts α forever on the left and ``αβα`` then α forever on the right, so the completed
    point leaves the subshift right after the word. ``fixed_point()`` puts β on both sides.
    """

    MARKER: str = "marker"
    FIXED_POINT: str = "fixed_point"

    __slots__ = ("_kind",)

    def __init__(self, kind: str = MARKER) -> None:
        if kind not in (self.MARKER, self.FIXED_POINT):
            raise ValueError(f"Unknown extension convention {kind!r}.")
        self._kind: str = kind

    def __repr__(self) -> str:
        return f"<ExtensionConvention(kind={self._kind})>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtensionConvention):
            return NotImplemented
        return self._kind == other._kind

    def __hash__(self) -> int:
        return hash(self._kind)

    @classmethod
    def marker(cls) -> ExtensionConvention:
        return cls(cls.MARKER)

    @classmethod
    def fixed_point(cls) -> ExtensionConvention:
        return cls(cls.FIXED_POINT)

    @property
    def kind(self) -> str:
        return self._kind

    def completed(self, word: Word, margin: int) -> int:
        """
        Bits of the completed point on positions ``-margin..len(word)+margin-1``, position
        ``-margin`` first.
        """
        n: int = len(word)
        if self._kind == self.FIXED_POINT:
            full: int = (1 << (n + 2 * margin)) - 1
            return (full & ~(((1 << n) - 1) << margin)) | (word.mask << margin)

        bits: int = word.mask << margin
        if margin >= 2:
            bits |= 1 << (margin + n + 1)
        return bits

    def window(self, word: Word, position: int, radius: int) -> Word:
        """The two-sided window of radius ``radius`` centered at ``position`` of the completed point."""
        margin: int = radius + max(0, -position, position - len(word) + 1)
        bits: int = self.completed(word, margin)
        return Word(2 * radius + 1, (bits >> (margin + position - radius)) & ((1 << (2 * radius + 1)) - 1))

    def on_subshift(self, word: Word) -> bool:
        """True when the completed point is known to lie in the subshift: ``β^n`` completed by β."""
        return self._kind == self.FIXED_POINT and word.mask == (1 << len(word)) - 1


def window_radius(table: LanguageTable) -> int:
    """Largest radius whose window fits the table."""
    return (table.max_len - 1) // 2


def psi_at(
    window: Word, table: LanguageTable, params: Optional[PotentialParams] = None, on_subshift: bool = False
) -> RealInterval:
    """
    Encloses ``ψ`` at the center of an odd two-sided window.

    ``ψ1`` is bracketed by the radius bounds of :func:`~odogibbs.language.two_sided_radius`; windows
    longer than the table are cut down to the longest centered window that fits. With
    ``on_subshift`` the point is known to lie in the subshift and ``ψ1`` is 0.

    Raises
    ------
    InsufficientWindow
        The window is shorter than ``2 * min_run + 1``.
    """
    params = params or PotentialParams()
    length: int = len(window)
    if length < params.min_window or length % 2 == 0:
        raise InsufficientWindow(Errors.insufficient_window(length, params.min_window))

    center: int = length // 2
    psi0: float = -float(params.beta_weight) if (window.mask >> center) & 1 else 0.0
    if on_subshift:
        return RealInterval(psi0)

    radius: int = min(center, window_radius(table))
    mask: int = (window.mask >> (center - radius)) & ((1 << (2 * radius + 1)) - 1)
    r_lower, r_upper = radius_bounds(table, 2 * radius + 1, mask)
    return params.psi1(r_lower, r_upper) + psi0


def psi_terms(
    word: Word, ext: ExtensionConvention, table: LanguageTable, params: PotentialParams
) -> List[RealInterval]:
    """``ψ`` at positions ``0..n-1`` of the completed point."""
    n: int = len(word)
    radius: int = window_radius(table)
    if 2 * radius + 1 < params.min_window:
        raise InsufficientWindow(Errors.insufficient_window(2 * radius + 1, params.min_window))

    if ext.on_subshift(word):
        return [RealInterval(-float(params.beta_weight))] * n

    bits: int = ext.completed(word, radius)
    size: int = 2 * radius + 1
    keep: int = (1 << size) - 1

    terms: List[RealInterval] = []
    for position in range(n):
        mask: int = (bits >> position) & keep
        psi0: float = -float(params.beta_weight) if (mask >> radius) & 1 else 0.0
        r_lower, r_upper = radius_bounds(table, size, mask)
        terms.append(params.psi1(r_lower, r_upper) + psi0)
    return terms


def birkhoff_psi(
    word: Word,
    ext: Optional[ExtensionConvention] = None,
    table: Optional[LanguageTable] = None,
    params: Optional[PotentialParams] = None,
) -> RealInterval:
    """
    Encloses ``S_nψ(z_W) = Σ ψ(σ**i z_W)`` for ``i < n``, where ``z_W`` completes ``word``.

    The table may be omitted only when the completed point lies in the subshift.
    """
    ext = ext or ExtensionConvention.marker()
    params = params or PotentialParams()

    if ext.on_subshift(word):
        return RealInterval(-float(params.beta_weight * len(word)))
    if table is None:
        raise ValueError("A language table is needed off the subshift.")

    return RealInterval.total(psi_terms(word, ext, table, params))
