"""Engine exceptions. Every error carries a stable machine-readable code."""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine failures.

    ``code`` is a stable SCREAMING_SNAKE identifier tests and clients can
    match on; ``detail`` is a human-readable explanation.
    """

    def __init__(self, code: str, detail: str):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail


class DatasetError(EngineError):
    """Raised by parsing and validation; ``line`` is 1-based when known."""

    def __init__(self, code: str, detail: str, line: int | None = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(code, detail)
        self.line = line


class DecodeError(EngineError):
    """Raised when wire bytes cannot be decoded; ``offset`` is the byte position."""

    def __init__(self, detail: str, offset: int = 0):
        super().__init__("DECODE_ERROR", f"{detail} (byte {offset})")
        self.offset = offset
