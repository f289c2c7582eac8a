"""Base parser class for tab-separated inputs."""

import logging
from collections.abc import Iterator
from typing import ClassVar, Generic, TypeVar

from core.models.parsers import InputKind
from services.parsers.models import ParseContext, TsvLine
from utils.exceptions import InputParseError, RaggedRow

logger = logging.getLogger(__name__)

T = TypeVar("T")


class TsvParser(Generic[T]):
    """
    Base class for the TSV input parsers.

    Handles decoding, LF/CRLF line endings, ``#`` comments and blank lines.
    Subclasses implement ``build`` over the resulting data lines.
    """

    input_kind: ClassVar[InputKind]

    def __init__(self, source: str | None = None):
        self.source = source

    def parse(self, raw: bytes) -> T:
        """Parse a whole byte stream; either returns a value or raises."""
        context, lines = self._split(raw)
        value = self.build(context, lines)
        logger.debug(f"Parsed {self.input_kind.value} input {self.source or '<bytes>'}")
        return value

    def build(self, context: ParseContext, lines: list[TsvLine]) -> T:
        raise NotImplementedError

    def _split(self, raw: bytes) -> tuple[ParseContext, list[TsvLine]]:
        text = self._decode(raw)
        comments: list[tuple[int, str]] = []
        lines: list[TsvLine] = []
        for line_no, line in self._numbered_lines(text):
            if not line.strip():
                continue
            if line.startswith("#"):
                comments.append((line_no, line))
                continue
            lines.append(TsvLine(line_no=line_no, fields=tuple(line.split("\t"))))
        return ParseContext(source=self.source, comments=tuple(comments)), lines

    def _decode(self, raw: bytes) -> str:
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as e:
            line_no = raw.count(b"\n", 0, e.start) + 1
            raise InputParseError("invalid UTF-8 text", line_no, self.source) from e

    @staticmethod
    def _numbered_lines(text: str) -> Iterator[tuple[int, str]]:
        if text.startswith("\ufeff"):
            text = text[1:]
        for index, line in enumerate(text.split("\n"), start=1):
            yield index, line.removesuffix("\r")

    def _require_width(self, line: TsvLine, expected: int | tuple[int, ...]) -> None:
        allowed = (expected,) if isinstance(expected, int) else expected
        if len(line.fields) not in allowed:
            raise RaggedRow(line.line_no, allowed[0], len(line.fields), self.source)

    def _require_token(self, line: TsvLine, column: int, what: str) -> str:
        token = line.fields[column - 1]
        if not token:
            raise InputParseError(f"column {column}: empty {what}", line.line_no, self.source)
        return token
