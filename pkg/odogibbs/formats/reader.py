from __future__ import annotations

from typing import Optional


class Reader:
    """
    Reads text records from raw bytes, one line at a time.

    Parameters
    ----------
    payload:
        Payload to read. Carriage returns are dropped, so CRLF and LF files read alike.

    Attributes
    ----------
    buffer:
        Provided payload.
    position:
        Current reader position.
    line:
        Number of complete lines read so far.
    """

    __slots__ = ("buffer", "position", "line")

    def __init__(self, payload: bytes) -> None:
        self.buffer: bytes = payload.replace(b"\r", b"")
        self.position: int = 0
        self.line: int = 0

    def __repr__(self) -> str:
        return f"<Reader(position={self.position}, line={self.line})>"

    @property
    def at_end(self) -> bool:
        return self.position >= len(self.buffer)

    def read_until(self, element: bytes) -> bytes:
        """
        Reads bytes up to the next ``element`` and skips over it.

        Raises
        ------
        RuntimeError
            ``element`` does not occur after the current position.
        """
        end: int = self.buffer.find(element, self.position)
        if end < 0:
            raise RuntimeError("There is no specific element in the buffer starting from the current position.")

        data: bytes = self.buffer[self.position : end]
        self.position = end + len(element)
        self.line += element.count(b"\n") + data.count(b"\n")
        return data

    def read_line(self) -> Optional[str]:
        """The next line without its terminator, or None at the end. A missing final newline is fine."""
        if self.at_end:
            return None
        if b"\n" not in self.buffer[self.position :]:
            self.line += 1
            return self.read().decode()
        return self.read_until(b"\n").decode()

    def read(self, size: Optional[int] = None) -> bytes:
        """
        Reads bytes starting at the current position.

        Parameters
        ----------
        size:
            Number of bytes to read, everything left by default.
        """
        if size is None:
            size = len(self.buffer) - self.position

        data: bytes = self.buffer[self.position : self.position + size]
        self.position += len(data)
        return data
