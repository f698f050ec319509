from __future__ import annotations

import csv
import io
import json
import math

from enum import Enum
from typing import Any, Callable, Dict, List, Union

from ..enums import OutputFormat, Side
from ..exactnum import DyadicInterval, DyadicRational, RealInterval
from ..language import LanguageTable, Word
from ..report import Report

SupportedTypes = Union[str, int, float, bool, DyadicRational, DyadicInterval, RealInterval, None]

LANGUAGE_HEADER: str = "# odogibbs language build_depth={depth} side={side} max_len={max_len}"


class Serializer:
    """
    Renders reports and language tables as text.

    Floats are written with 17 significant digits, exact dyadic values as ``m*2^e`` and
    intervals as ``[lo,hi]``.
    """

    __slots__ = ()

    def process(self, value: SupportedTypes) -> str:
        """
        Serialize a single cell value.

        Raises
        ------
        TypeError
            If the type of value is not supported by serializer.
        """
        if value is None:
            return ""
        if isinstance(value, Enum):
            return str(value.value)

        # Keyed by exact type, so bool never falls through to int.
        handlers: Dict[type, Callable[[Any], str]] = {
            bool: self.serialize_bool,
            str: str,
            int: str,
            float: self.serialize_float,
            DyadicRational: self.serialize_dyadic,
            DyadicInterval: self.serialize_interval,
            RealInterval: self.serialize_interval,
        }
        handler = handlers.get(type(value))
        if handler is None:
            raise TypeError(
                "Specified value for serialization has an unsupported type."
                f"Currently the serializer supports: {SupportedTypes}"
            )
        return handler(value)

    @staticmethod
    def serialize_float(value: float) -> str:
        """17 significant digits, ``inf``, ``-inf`` or ``nan``."""
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.17g}"

    @staticmethod
    def serialize_bool(value: bool) -> str:
        return "true" if value else "false"

    @staticmethod
    def serialize_dyadic(value: DyadicRational) -> str:
        return value.render()

    def serialize_interval(self, value: Union[DyadicInterval, RealInterval]) -> str:
        return f"[{self.process(value.lo)},{self.process(value.hi)}]"

    def json_value(self, value: Any) -> Any:
        """Finite floats, ints, bools and strings stay native; everything else becomes text."""
        if isinstance(value, dict):
            return {str(key): self.json_value(item) for key, item in value.items()}
        if isinstance(value, (list, tuple)):
            return [self.json_value(item) for item in value]
        if isinstance(value, float) and math.isfinite(value):
            return value
        if value is None or isinstance(value, (bool, int, str)):
            return value
        return self.process(value)

    def to_json(self, report: Report) -> str:
        payload: Dict[str, Any] = {
            "meta": {key: self.json_value(value) for key, value in report.meta.items()},
            "rows": [{key: self.json_value(value) for key, value in row.items()} for row in report.rows],
        }
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self, report: Report) -> str:
        """Comma separated with a header row and LF line endings; an empty report gives the header only."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(report.columns)
        for row in report.rows:
            writer.writerow([self.process(row.get(column)) for column in report.columns])
        return buffer.getvalue()

    def to_text(self, report: Report) -> str:
        """Aligned columns, two spaces apart."""
        table: List[List[str]] = [list(report.columns)]
        table.extend([self.process(row.get(column)) for column in report.columns] for row in report.rows)

        widths: List[int] = [max(len(line[i]) for line in table) for i in range(len(report.columns))]
        lines: List[str] = ["  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() for line in table]
        return "\n".join(lines) + "\n"

    def render(self, report: Report, output: OutputFormat) -> bytes:
        handlers: Dict[OutputFormat, Callable[[Report], str]] = {
            OutputFormat.JSON: self.to_json,
            OutputFormat.CSV: self.to_csv,
            OutputFormat.TEXT: self.to_text,
        }
        return handlers[output](report).encode()

    @staticmethod
    def serialize_language(table: LanguageTable, side: Side) -> str:
        """
        The words of one side, one ``<length> <word>`` line each, after a header line.

        Lengths ascend and words of equal length are sorted by bitmask.
        """
        lines: List[str] = [LANGUAGE_HEADER.format(depth=table.build_depth, side=side.value, max_len=table.max_len)]
        for length in range(1, table.max_len + 1):
            lines.extend(f"{length} {Word(length, mask)}" for mask in sorted(table.masks(length, side)))
        return "\n".join(lines) + "\n"
