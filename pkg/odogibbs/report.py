from __future__ import annotations

from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .enums import Commands, ExitStatus

Row = Dict[str, Any]

# Fields that identify a row, in sorting priority.
KEY_FIELDS: Tuple[str, ...] = ("kind", "id", "event", "sample", "k", "n", "l", "m", "word")


def _sortable(value: Any) -> Tuple[int, Any]:
    if value is None:
        return (0, "")
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return (1, value)
    return (2, str(value))


def row_key(row: Row) -> Tuple[Tuple[int, Any], ...]:
    """The sorting key of a row, built from its identifying fields."""
    return tuple(_sortable(row.get(field)) for field in KEY_FIELDS)


class Report:
    """
    The rows produced by one command, with its outcome.

    Parameters
    ----------
    command:
        The command that produced the rows.
    rows:
        Rows as flat dictionaries, stored sorted by :func:`row_key`.
    meta:
        Run metadata written to JSON output.
    columns:
        Column order for tabular output. Defaults to the sorted union of the row keys.
    checks_passed:
        False if any gating check failed.
    converged:
        False if any computation stopped short of its tolerance.
    """

    __slots__ = ("command", "rows", "meta", "columns", "checks_passed", "converged")

    def __init__(
        self,
        command: Commands,
        rows: Iterable[Row] = (),
        meta: Optional[Dict[str, Any]] = None,
        columns: Optional[Sequence[str]] = None,
        checks_passed: bool = True,
        converged: bool = True,
    ) -> None:
        self.command: Commands = command
        self.rows: List[Row] = sorted(rows, key=row_key)
        self.meta: Dict[str, Any] = dict(meta or {})
        self.columns: Tuple[str, ...] = tuple(columns) if columns is not None else self._columns()
        self.checks_passed: bool = checks_passed
        self.converged: bool = converged

    def __repr__(self) -> str:
        return f"<Report(command={self.command.value}, rows={len(self.rows)}, status={self.status.name})>"

    def __len__(self) -> int:
        return len(self.rows)

    def _columns(self) -> Tuple[str, ...]:
        names = {name for row in self.rows for name in row}
        identifying = [name for name in KEY_FIELDS if name in names]
        return tuple(identifying + sorted(names.difference(identifying)))

    @property
    def status(self) -> ExitStatus:
        """A failed gating check outranks a computation that did not converge."""
        if not self.checks_passed:
            return ExitStatus.CHECK_FAILED
        if not self.converged:
            return ExitStatus.NOT_CONVERGED
        return ExitStatus.OK
