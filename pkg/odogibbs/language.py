from __future__ import annotations

import logging

from threading import Lock
from time import perf_counter
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union, overload

from .coding import MIN_RUN, hits
from .enums import Containment, Errors, Letter, Side
from .exceptions import InsufficientDepth, WordLengthOverflow
from .pool import WorkerPool

Pair = Tuple[int, int]

# Build depth slack over the word length, as in the default configuration.
DEPTH_SLACK: int = 16


class Word:
    """
    A finite word over ``{α, β}``, stored as a bitmask with bit ``j`` set for a β at position ``j``.

    Parameters
    ----------
    length:
        Number of letters, at least 1.
    mask:
        The β positions.
    """

    __slots__ = ("_length", "_mask")

    def __init__(self, length: int, mask: int = 0) -> None:
        if length < 1:
            raise ValueError("A word has at least one letter.")
        if mask < 0 or mask >> length:
            raise ValueError(f"Mask {mask} does not fit a word of length {length}.")

        self._length: int = length
        self._mask: int = mask

    def __repr__(self) -> str:
        return f"<Word({self})>"

    def __str__(self) -> str:
        return "".join("b" if (self._mask >> j) & 1 else "a" for j in range(self._length))

    def __len__(self) -> int:
        return self._length

    def __hash__(self) -> int:
        return hash((self._length, self._mask))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self._length == other._length and self._mask == other._mask

    def __iter__(self) -> Iterator[Letter]:
        for j in range(self._length):
            yield Letter.BETA if (self._mask >> j) & 1 else Letter.ALPHA

    @overload
    def __getitem__(self, index: int) -> Letter: ...

    @overload
    def __getitem__(self, index: slice) -> Word: ...

    def __getitem__(self, index: Union[int, slice]) -> Union[Letter, Word]:
        if isinstance(index, slice):
            start, stop, stride = index.indices(self._length)
            if stride != 1:
                raise ValueError("Words only support contiguous slices.")
            return self.subword(start, stop - start)

        if index < 0:
            index += self._length
        if not 0 <= index < self._length:
            raise IndexError("Word index out of range.")
        return Letter.BETA if (self._mask >> index) & 1 else Letter.ALPHA

    def __add__(self, other: Word) -> Word:
        return Word(self._length + other._length, self._mask | (other._mask << self._length))

    @property
    def mask(self) -> int:
        return self._mask

    @classmethod
    def parse(cls, text: str) -> Word:
        """
        Reads a word written with ``a`` for α and ``b`` for β.

        Raises
        ------
        ValueError
            Empty text or a letter other than ``a`` and ``b``.
        """
        text = text.strip()
        if not text or set(text) - {"a", "b"}:
            raise ValueError(Errors.BadWord.value)
        return cls(len(text), sum(1 << j for j, letter in enumerate(text) if letter == "b"))

    @classmethod
    def alpha(cls, length: int) -> Word:
        return cls(length, 0)

    @classmethod
    def beta(cls, length: int) -> Word:
        return cls(length, (1 << length) - 1)

    def subword(self, start: int, length: int) -> Word:
        return Word(length, (self._mask >> start) & ((1 << length) - 1))

    @property
    def beta_count(self) -> int:
        return bin(self._mask).count("1")

    @property
    def longest_beta_run(self) -> int:
        run, mask = 0, self._mask
        while mask:
            mask &= mask >> 1
            run += 1
        return run


def word_stats(word: Word) -> Tuple[int, int]:
    """``(beta_count, longest_beta_run)`` of a word."""
    return word.beta_count, word.longest_beta_run


def split_depth(max_len: int) -> int:
    """
    The residue depth ``D`` below which a point's letters are tabulated.

    ``2**D`` exceeds twice the longest word, so a window carries at most once past bit ``D``.
    """
    return max(MIN_RUN, max_len.bit_length() + 1)


def theta(g: int, e: int, split: int) -> Optional[int]:
    """
    The reach of the 2-adic integer ``g - 2**e`` above the split depth, None when unbounded.

    Letter ``j`` of ``x = v + 2**split * H`` is β beyond the local test exactly when
    ``(v + j) mod 2**split`` is below the reach of ``H`` (or of ``H + 1`` after a carry). The
    reach is the supremum of ``i + split - 2**split * (H mod 2**i)`` over ``i >= 1``, attained
    just below a set bit of ``g`` or at ``e``.
    """
    if g >= (1 << e):
        return None

    value: int = g - (1 << e)
    candidates: Set[int] = {s for s in range(1, e + 1) if (g >> s) & 1}
    candidates.add(e + 1)
    if e >= 1:
        candidates.add(e)

    return max(i + split - (value & ((1 << i) - 1)) * (1 << split) for i in candidates)


def _clamp(value: Optional[int], top: int) -> int:
    if value is None:
        return top
    return min(max(value, 0), top)


def witness_pairs(max_len: int, depth: int) -> FrozenSet[Pair]:
    """
    Clamped reach pairs ``(θ(H), θ(H + 1))`` of explicit witnesses determined by ``depth`` bits.

    The witnesses are the integers ``H >= 0`` and ``H = g - 2**e`` with ``e <= depth - D`` and
    ``g`` one of ``0``, ``2**k - 1`` or ``2**k`` for ``k < e``.
    """
    split: int = split_depth(max_len)
    span: int = 1 << split
    top_exponent: int = depth - split

    pairs: Set[Pair] = {(span, max_len)}
    for e in range(0, top_exponent + 1):
        values: Set[int] = {0}
        for k in range(e):
            values.update(((1 << k) - 1, 1 << k))

        for g in values:
            after: Optional[int] = theta(g + 1, e, split)
            pairs.add((_clamp(theta(g, e, split), span), _clamp(after, max_len)))

    return frozenset(pairs)


def admissible(p0: int, p1: int, w0: int, length: int, split: int) -> bool:
    """
    Whether a prefix of ``p0`` and a post-carry run of ``p1`` extra β's are realizable together.

    Every clamped reach pair satisfies one of: the first reach is full (any run), the run is
    empty, or the run is at least ``split + 1`` long.
    """
    if p0 == w0 or p1 >= min(split + 1, length - w0):
        return True
    return p1 == 0


class _Local:
    __slots__ = ("split", "span", "_pattern")

    def __init__(self, split: int) -> None:
        self.split: int = split
        self.span: int = 1 << split
        pattern: int = 0
        for r in range(self.span):
            if hits(r, MIN_RUN, split):
                pattern |= 1 << r
        self._pattern: int = pattern | (pattern << self.span)

    def mask(self, v: int, length: int) -> int:
        return (self._pattern >> v) & ((1 << length) - 1)


def _over_words(vs: Iterable[int], length: int, local: _Local) -> Set[int]:
    words: Set[int] = set()
    for v in vs:
        base: int = local.mask(v, length)
        w0: int = min(length, local.span - v)

        for p0 in range(w0 + 1):
            prefix: int = base | ((1 << p0) - 1)
            if w0 == length:
                words.add(prefix)
                continue

            for p1 in range(length - w0 + 1):
                if admissible(p0, p1, w0, length, local.split):
                    words.add(prefix | (((1 << p1) - 1) << w0))
    return words


def _under_words(vs: Iterable[int], length: int, local: _Local, pairs: FrozenSet[Pair]) -> Set[int]:
    words: Set[int] = set()
    for v in vs:
        base: int = local.mask(v, length)
        w0: int = min(length, local.span - v)

        projected: Set[Pair] = {(min(max(a - v, 0), w0), min(b, length - w0)) for a, b in pairs}
        for p0, p1 in projected:
            words.add(base | ((1 << p0) - 1) | (((1 << p1) - 1) << w0))
    return words


class LanguageTable:
    """
    Under and over approximations of the words of the coded subshift, for all lengths up to
    ``max_len``.

    ``over`` holds every word of the language. ``under`` holds the words realized by explicit
    witness points whose coordinates are fixed by ``build_depth`` bits, so ``under ⊆ over``.
    Shorter lengths are prefix projections of the longest, computed on first use.

    THREAD SAFE.
    """

    __slots__ = ("_max_len", "_build_depth", "_split", "_under", "_over", "_lock")

    def __init__(self, max_len: int, build_depth: int, under: Iterable[int], over: Iterable[int]) -> None:
        self._max_len: int = max_len
        self._build_depth: int = build_depth
        self._split: int = split_depth(max_len)
        self._under: Dict[int, FrozenSet[int]] = {max_len: frozenset(under)}
        self._over: Dict[int, FrozenSet[int]] = {max_len: frozenset(over)}
        self._lock: Lock = Lock()

    def __repr__(self) -> str:
        return f"<LanguageTable(max_len={self._max_len}, build_depth={self._build_depth})>"

    @property
    def max_len(self) -> int:
        return self._max_len

    @property
    def build_depth(self) -> int:
        return self._build_depth

    @property
    def split(self) -> int:
        """Residue depth used for the local letter tests."""
        return self._split

    def _side(self, side: Side) -> Dict[int, FrozenSet[int]]:
        return self._under if side is Side.UNDER else self._over

    def masks(self, length: int, side: Side) -> FrozenSet[int]:
        """
        Bitmasks of the words of ``length`` on one side.

        Raises
        ------
        WordLengthOverflow
            ``length`` exceeds ``max_len``.
        """
        if not 1 <= length <= self._max_len:
            raise WordLengthOverflow(Errors.word_too_long(length, self._max_len))

        table = self._side(side)
        cached = table.get(length)
        if cached is not None:
            return cached

        with self._lock:
            if length not in table:
                keep: int = (1 << length) - 1
                table[length] = frozenset(mask & keep for mask in table[self._max_len])
            return table[length]

    def words(self, length: int, side: Side) -> List[Word]:
        """Words of ``length`` on one side, sorted by mask."""
        return [Word(length, mask) for mask in sorted(self.masks(length, side))]

    def count(self, length: int) -> Tuple[int, int]:
        """``(|L⁻_n|, |L⁺_n|)``."""
        return len(self.masks(length, Side.UNDER)), len(self.masks(length, Side.OVER))

    def classify(self, length: int, mask: int) -> Containment:
        if mask in self.masks(length, Side.UNDER):
            return Containment.CERTAIN_IN
        if mask not in self.masks(length, Side.OVER):
            return Containment.CERTAIN_OUT
        return Containment.UNKNOWN

    def is_certified(self, length: int, mask: int) -> bool:
        return mask in self.masks(length, Side.UNDER)

    def is_possible(self, length: int, mask: int) -> bool:
        return mask in self.masks(length, Side.OVER)


def build_language(max_len: int = 64, depth: Optional[int] = None, pool: Optional[WorkerPool] = None) -> LanguageTable:
    """
    Builds the language table for all lengths up to ``max_len``.

    Parameters
    ----------
    max_len:
        Longest word length.
    depth:
        Build depth, the number of coordinates fixing the witness points of the under side.
        Defaults to ``max_len + 16``.
    pool:
        Optional worker pool; residues are split into contiguous ranges and merged.

    Raises
    ------
    InsufficientDepth
        ``depth < max_len + 5``.
    """
    if max_len < 1:
        raise ValueError("max_len must be positive.")

    build_depth: int = max_len + DEPTH_SLACK if depth is None else depth
    if build_depth < max_len + MIN_RUN:
        raise InsufficientDepth(
            Errors.insufficient_depth(build_depth, max_len + MIN_RUN), build_depth, max_len + MIN_RUN
        )

    started: float = perf_counter()
    local: _Local = _Local(split_depth(max_len))
    pairs: FrozenSet[Pair] = witness_pairs(max_len, build_depth)
    workers: WorkerPool = pool or WorkerPool(1)
    residues: List[int] = list(range(local.span))

    over: Set[int] = set()
    for part in workers.map_chunks(lambda vs: [_over_words(vs, max_len, local)], residues):
        over |= part

    under: Set[int] = set()
    for part in workers.map_chunks(lambda vs: [_under_words(vs, max_len, local, pairs)], residues):
        under |= part

    logging.info(
        "language -> built L(%s) at depth %s: %s under, %s over words in %.2fs.",
        max_len,
        build_depth,
        len(under),
        len(over),
        perf_counter() - started,
    )
    return LanguageTable(max_len, build_depth, under, over)


def contains(table: LanguageTable, word: Word) -> Containment:
    """
    ``CERTAIN_IN`` for certified words, ``CERTAIN_OUT`` for words outside the over side,
    ``UNKNOWN`` otherwise.

    Raises
    ------
    WordLengthOverflow
        The word is longer than the table.
    """
    return table.classify(len(word), word.mask)


def count_words(table: LanguageTable, n: int) -> Tuple[int, int]:
    """``(|L⁻_n|, |L⁺_n|)``, see :meth:`LanguageTable.count`."""
    return table.count(n)


def centered(window: Word, rho: int) -> Tuple[int, int]:
    """Length and mask of the centered ``2*rho - 1`` subword of an odd-length window."""
    radius: int = len(window) // 2
    length: int = 2 * rho - 1
    return length, (window.mask >> (radius - rho + 1)) & ((1 << length) - 1)


def radius_bounds(table: LanguageTable, length: int, mask: int) -> Tuple[int, float]:
    """
    Radius bounds of a raw odd-length window, see :func:`two_sided_radius`.
    """
    radius: int = length // 2
    top: int = radius + 1

    def possible(rho: int) -> bool:
        size: int = 2 * rho - 1
        return table.is_possible(size, (mask >> (radius - rho + 1)) & ((1 << size) - 1))

    def certified(rho: int) -> bool:
        size: int = 2 * rho - 1
        return table.is_certified(size, (mask >> (radius - rho + 1)) & ((1 << size) - 1))

    # The over side is the whole language, which is factorial, so membership is monotone.
    low, high = 1, top
    while low < high:
        middle: int = (low + high + 1) // 2
        if possible(middle):
            low = middle
        else:
            high = middle - 1

    upper: float = float("inf") if low == top else float(low)

    lower: int = 1
    for rho in range(low, 1, -1):
        if certified(rho):
            lower = rho
            break

    return lower, upper


def two_sided_radius(window: Word, table: LanguageTable) -> Tuple[int, float]:
    """
    Bounds ``(r_lower, r_upper)`` on the radius of a two-sided window indexed ``-r..r``.

    The radius is the largest ``ρ`` whose centered ``2ρ - 1`` subword lies in the language, so
    ``dist(z, Y) = 2**-radius``. A window certified all the way has ``r_lower = r + 1``; one that is
    never excluded has ``r_upper = inf``.

    Raises
    ------
    ValueError
        The window has even length.
    WordLengthOverflow
        The window is longer than the table.
    """
    if len(window) % 2 == 0:
        raise ValueError("Two-sided windows have odd length.")
    if len(window) > table.max_len:
        raise WordLengthOverflow(Errors.word_too_long(len(window), table.max_len))
    return radius_bounds(table, len(window), window.mask)


class Decomposition:
    """
    A split of a word into maximal segments of the language.

    Attributes
    ----------
    segments:
        The pieces, concatenating back to the input word.
    lengths:
        Piece lengths ``n_1..n_l``.
    cuts:
        Start positions ``q_1..q_{l-1}`` of every piece but the first.
    """

    __slots__ = ("segments", "lengths", "cuts")

    def __init__(self, segments: List[Word]) -> None:
        self.segments: List[Word] = segments
        self.lengths: List[int] = [len(segment) for segment in segments]
        self.cuts: List[int] = []

        position: int = 0
        for length in self.lengths[:-1]:
            position += length
            self.cuts.append(position)

    def __repr__(self) -> str:
        return f"<Decomposition({'|'.join(str(s) for s in self.segments)})>"

    def __len__(self) -> int:
        return len(self.segments)

    def joined(self) -> Word:
        result: Word = self.segments[0]
        for segment in self.segments[1:]:
            result = result + segment
        return result


def maximal_decompose(word: Word, table: LanguageTable) -> Decomposition:
    """
    Greedy left to right split into maximal segments.

    Membership is tested against the over side, so unknown words count as in the language.
    A segment that reaches ``max_len`` is cut there.
    """
    segments: List[Word] = []
    start: int = 0
    total: int = len(word)

    while start < total:
        longest: int = 1
        limit: int = min(table.max_len, total - start)
        while longest < limit and table.is_possible(longest + 1, word.subword(start, longest + 1).mask):
            longest += 1

        segments.append(word.subword(start, longest))
        start += longest

    return Decomposition(segments)


def subword_violations(table: LanguageTable, length: int) -> int:
    """Number of certified words of ``length`` whose one-letter-shorter suffix is excluded."""
    if length < 2:
        return 0
    return sum(1 for mask in table.masks(length, Side.UNDER) if not table.is_possible(length - 1, mask >> 1))
