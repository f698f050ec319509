from __future__ import annotations

import logging

from pathlib import Path
from typing import Any, Callable, Dict, Final, Mapping, Tuple, Union

from .exactnum import DyadicRational
from .exceptions import UsageError
from .measure import DEFAULT_DEPTH_CAP, DEFAULT_TOLERANCE, MAX_DEPTH_CAP
from .odometer import SCAN_LIMIT

_TRUE: Final[Tuple[str, ...]] = ("1", "true", "yes", "on")
_FALSE: Final[Tuple[str, ...]] = ("0", "false", "no", "off")


def _boolean(text: str) -> bool:
    lowered: str = text.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ValueError(f"{text!r} is not a boolean.")


def _positive_float(text: str) -> float:
    value: float = float(text)
    if not value > 0.0:
        raise ValueError(f"{text!r} is not positive.")
    return value


# Parser and smallest accepted value per key.
PARSERS: Final[Dict[str, Tuple[Callable[[str], Any], Any]]] = {
    "depth": (int, 6),
    "max_len": (int, 1),
    "n_max": (int, 1),
    "tolerance": (DyadicRational.parse, None),
    "depth_cap": (int, 5),
    "seed": (int, 0),
    "samples": (int, 1),
    "workers": (int, 1),
    "allow_large": (_boolean, None),
    "series_terms": (int, 6),
    "scan_limit": (int, 64),
    "threshold_scale": (_positive_float, None),
}


class RunConfig:
    """
    Settings shared by every command.

    Values come from the defaults, then a ``key=value`` file, then command-line flags, each
    overriding the one before. Keys are the long flag names with ``-`` replaced by ``_``.

    Raises
    ------
    UsageError
        An unknown key or a value out of range.
    """

    __slots__ = tuple(PARSERS)

    def __init__(self, **values: Any) -> None:
        self.depth: int = 80
        self.max_len: int = 64
        self.n_max: int = 16
        self.tolerance: DyadicRational = DEFAULT_TOLERANCE
        self.depth_cap: int = DEFAULT_DEPTH_CAP
        self.seed: int = 0
        self.samples: int = 100
        self.workers: int = 1
        self.allow_large: bool = False
        self.series_terms: int = 32
        self.scan_limit: int = SCAN_LIMIT
        self.threshold_scale: float = 1.0
        self.update(values)

    def __repr__(self) -> str:
        return f"<RunConfig({', '.join(f'{k}={v}' for k, v in self.as_dict().items())})>"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunConfig):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def as_dict(self) -> Dict[str, Any]:
        return {key: getattr(self, key) for key in PARSERS}

    def update(self, values: Mapping[str, Any]) -> RunConfig:
        """Sets parsed or raw values, validating each one. Returns self."""
        for key, raw in values.items():
            if key not in PARSERS:
                raise UsageError(f"Unknown configuration key {key!r}.")
            setattr(self, key, self._validate(key, raw))

        if self.depth_cap > MAX_DEPTH_CAP:
            raise UsageError(f"depth_cap must be at most {MAX_DEPTH_CAP}.")
        return self

    @staticmethod
    def _validate(key: str, raw: Any) -> Any:
        parser, minimum = PARSERS[key]
        try:
            value = parser(raw) if isinstance(raw, str) else raw
        except ValueError as exception:
            raise UsageError(f"Bad value for {key}: {exception}") from None

        if key == "tolerance" and not (isinstance(value, DyadicRational) and value > 0):
            raise UsageError("tolerance must be a positive dyadic rational such as 2^-24.")
        if minimum is not None and value < minimum:
            raise UsageError(f"{key} must be at least {minimum}, got {value}.")
        return value

    @staticmethod
    def parse(text: str) -> Dict[str, str]:
        """
        Reads ``key=value`` lines. ``#`` starts a comment and blank lines are skipped.

        Raises
        ------
        UsageError
            A line without ``=``.
        """
        values: Dict[str, str] = {}
        for number, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"Line {number} of the configuration is not key=value: {line!r}.")

            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
        return values

    @classmethod
    def load(cls, path: Union[str, Path]) -> RunConfig:
        """
        Defaults overridden by a configuration file.

        Raises
        ------
        UsageError
            The file cannot be read or holds a bad entry.
        """
        try:
            text: str = Path(path).read_text()
        except OSError as exception:
            raise UsageError(f"Cannot read the configuration file {path}: {exception.strerror}.") from None

        values: Dict[str, str] = cls.parse(text)
        logging.debug("config -> %s keys from %s.", len(values), path)
        return cls(**values)
