from __future__ import annotations

import re

from typing import Dict, Optional, Set, TYPE_CHECKING

from ..enums import Side
from ..exactnum import DyadicRational
from ..language import LanguageTable, Word

if TYPE_CHECKING:
    from .reader import Reader

_HEADER = re.compile(r"^# odogibbs language build_depth=(\d+) side=(under|over) max_len=(\d+)$")


class LanguageFile:
    """
    The contents of one serialized side of a language table.

    Attributes
    ----------
    words:
        Bitmasks per word length.
    """

    __slots__ = ("build_depth", "side", "max_len", "words")

    def __init__(self, build_depth: int, side: Side, max_len: int, words: Dict[int, Set[int]]) -> None:
        self.build_depth: int = build_depth
        self.side: Side = side
        self.max_len: int = max_len
        self.words: Dict[int, Set[int]] = words

    def __repr__(self) -> str:
        return f"<LanguageFile(side={self.side.value}, build_depth={self.build_depth}, max_len={self.max_len})>"


class Deserializer:
    """
    Reads language files and exact values back from text.
    """

    __slots__ = ()

    def process(self, reader: Reader) -> LanguageFile:
        """
        Reads one side of a language table.

        Raises
        ------
        ValueError
            A missing or malformed header, a malformed line, or a word longer than ``max_len``.
        """
        header: Optional[str] = reader.read_line()
        match = _HEADER.match(header.strip()) if header is not None else None
        if match is None:
            raise ValueError("A language file starts with a '# odogibbs language' header line.")

        build_depth, max_len = int(match.group(1)), int(match.group(3))
        words: Dict[int, Set[int]] = {}

        while (line := reader.read_line()) is not None:
            line = line.strip()
            if not line or line.startswith("#"):
                continue

            parts = line.split()
            if len(parts) != 2 or not parts[0].isdigit():
                raise ValueError(f"Malformed language line {reader.line}: {line!r}.")

            length: int = int(parts[0])
            word: Word = Word.parse(parts[1])
            if len(word) != length or length > max_len:
                raise ValueError(f"Word length mismatch on line {reader.line}: {line!r}.")
            words.setdefault(length, set()).add(word.mask)

        return LanguageFile(build_depth, Side(match.group(2)), max_len, words)

    def load_language(self, under: Reader, over: Reader) -> LanguageTable:
        """
        Rebuilds a table from its two serialized sides.

        Raises
        ------
        ValueError
            The files disagree on the build, or are not one under and one over side.
        """
        low, high = self.process(under), self.process(over)
        if (low.side, high.side) != (Side.UNDER, Side.OVER):
            raise ValueError("Expected one under and one over language file, in that order.")
        if (low.build_depth, low.max_len) != (high.build_depth, high.max_len):
            raise ValueError("The language files come from different builds.")

        return LanguageTable(
            low.max_len, low.build_depth, low.words.get(low.max_len, set()), high.words.get(high.max_len, set())
        )

    @staticmethod
    def deserialize_dyadic(text: str) -> DyadicRational:
        """Parses the ``m*2^e`` form, see :meth:`~odogibbs.exactnum.DyadicRational.parse`."""
        return DyadicRational.parse(text)
