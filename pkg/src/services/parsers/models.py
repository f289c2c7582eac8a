"""Data models for the parser module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class TsvLine:
    """One data line of a TSV input with its physical (1-based) line number."""

    line_no: int
    fields: tuple[str, ...]


@dataclass(frozen=True)
class ParseContext:
    """Context information for parsing operations."""

    source: str | None = None
    comments: tuple[tuple[int, str], ...] = ()

    def comment_value(self, key: str) -> tuple[int, str] | None:
        """Value of a ``#key: value`` comment line, if present."""
        prefix = f"{key.lower()}:"
        for line_no, text in self.comments:
            body = text.lstrip("#").strip()
            if body.lower().startswith(prefix):
                return line_no, body[len(prefix) :].strip()
        return None
