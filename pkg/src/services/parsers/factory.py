"""Factory class for creating TSV parser instances."""

from typing import Any, ClassVar

from core.models.parsers import InputKind
from services.parsers.base import TsvParser
from services.parsers.instances import (
    CandidateListParser,
    ExpressionTableParser,
    GoAnnotationParser,
    KoMappingParser,
)


class ParserFactory:
    """Factory class to create the parser for each input kind."""

    _parsers: ClassVar[dict[InputKind, type[TsvParser[Any]]]] = {
        InputKind.EXPRESSION: ExpressionTableParser,
        InputKind.KO_MAPPING: KoMappingParser,
        InputKind.CANDIDATES: CandidateListParser,
        InputKind.GO_ANNOTATION: GoAnnotationParser,
    }

    @classmethod
    def create_parser(cls, input_kind: InputKind, source: str | None = None) -> TsvParser[Any]:
        """
        Create a parser instance for the given input kind.

        Args:
            input_kind: Which input file is being parsed
            source: File name used in error messages

        Returns:
            An instance of the appropriate parser class
        """
        return cls._parsers[input_kind](source)
