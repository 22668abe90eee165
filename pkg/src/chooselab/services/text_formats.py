"""Line-oriented tokenizer shared by the graph, list and QDIMACS readers."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
import logging

_logger = logging.getLogger(__name__)


class ParseError(ValueError):
    """Raised when an input file is malformed; ``line`` is 1-based (0 for whole-file problems)."""

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class Record:
    line: int
    tag: str
    fields: tuple[str, ...]


def iter_records(text: str, comment_prefixes: tuple[str, ...] = ("#",)) -> Iterator[Record]:
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(comment_prefixes):
            continue
        tokens = stripped.split()
        yield Record(number, tokens[0], tuple(tokens[1:]))


def fail(message: str, line: int = 0) -> ParseError:
    """Log and build a ParseError; callers ``raise fail(...)``."""
    error = ParseError(message, line)
    _logger.error(str(error))
    return error


def read_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise fail(f"{what} must be an integer, got {token!r}.", line) from None


__all__ = ["ParseError", "Record", "fail", "iter_records", "read_int"]
