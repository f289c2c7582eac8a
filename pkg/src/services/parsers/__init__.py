"""
Parsers for every user-supplied input and for KEGG's KGML pathway files.

All parsers are pure functions over byte streams: they either return a fully
validated value or raise a structured error naming the offending line (or
KGML element). Nothing is returned partially.

Example usage:
    from services.parsers import parse_expression_table

    matrix = parse_expression_table(Path("expr.tsv").read_bytes())
"""

from core.models.expression import CandidateSet, ExpressionMatrix, GoAnnotation, KoMapping
from core.models.parsers import InputKind
from services.parsers.base import TsvParser
from services.parsers.factory import ParserFactory
from services.parsers.instances import (
    CandidateListParser,
    ExpressionTableParser,
    GoAnnotationParser,
    KoMappingParser,
)
from services.parsers.kgml import KgmlParser, parse_kgml
from services.parsers.models import ParseContext, TsvLine


def parse_expression_table(raw: bytes, source: str | None = None) -> ExpressionMatrix:
    return ParserFactory.create_parser(InputKind.EXPRESSION, source).parse(raw)


def parse_ko_mapping(raw: bytes, source: str | None = None) -> KoMapping:
    return ParserFactory.create_parser(InputKind.KO_MAPPING, source).parse(raw)


def parse_candidate_lists(raw: bytes, source: str | None = None) -> list[CandidateSet]:
    return ParserFactory.create_parser(InputKind.CANDIDATES, source).parse(raw)


def parse_go_annotation(raw: bytes, source: str | None = None) -> GoAnnotation:
    return ParserFactory.create_parser(InputKind.GO_ANNOTATION, source).parse(raw)


__all__ = [
    "CandidateListParser",
    "ExpressionTableParser",
    "GoAnnotationParser",
    "KgmlParser",
    "KoMappingParser",
    "ParseContext",
    "ParserFactory",
    "TsvLine",
    "TsvParser",
    "parse_candidate_lists",
    "parse_expression_table",
    "parse_go_annotation",
    "parse_ko_mapping",
    "parse_kgml",
]
