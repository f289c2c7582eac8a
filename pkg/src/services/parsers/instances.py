"""Concrete parser implementations for the four TSV inputs."""

import logging
import re

import numpy as np

from core.models.expression import (
    KO_PATTERN,
    CandidateSet,
    ExpressionMatrix,
    GoAnnotation,
    GoTerm,
    KoMapping,
)
from core.models.parsers import InputKind
from services.parsers.base import TsvParser
from services.parsers.models import ParseContext, TsvLine
from utils.exceptions import (
    ConflictingNamespace,
    DuplicateCondition,
    DuplicateGene,
    EmptyFile,
    InputParseError,
    MalformedKoId,
    NegativeValue,
    NonNumericValue,
    UnknownNamespace,
)

logger = logging.getLogger(__name__)

# Plain or scientific decimals; no comma separators, no nan/inf, no underscores
DECIMAL_PATTERN = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")

GENE_ID_HEADER = "gene_id"


class ExpressionTableParser(TsvParser[ExpressionMatrix]):
    """Header ``gene_id<TAB>cond1<TAB>...`` then one row per gene."""

    input_kind = InputKind.EXPRESSION

    def build(self, context: ParseContext, lines: list[TsvLine]) -> ExpressionMatrix:
        if not lines:
            raise EmptyFile(self.source)

        header, rows = lines[0], lines[1:]
        if header.fields[0] != GENE_ID_HEADER:
            raise InputParseError(
                f"header must start with '{GENE_ID_HEADER}'", header.line_no, self.source
            )
        conditions = header.fields[1:]
        if not conditions:
            raise InputParseError("header declares no conditions", header.line_no, self.source)
        seen_conditions: set[str] = set()
        for column, label in enumerate(conditions, start=2):
            if not label:
                raise InputParseError(
                    f"column {column}: empty condition label", header.line_no, self.source
                )
            if label in seen_conditions:
                raise DuplicateCondition(label, header.line_no, self.source)
            seen_conditions.add(label)

        if not rows:
            raise EmptyFile(self.source)

        width = len(header.fields)
        gene_ids: list[str] = []
        seen_genes: set[str] = set()
        values = np.empty((len(rows), len(conditions)), dtype=np.float64)

        for i, line in enumerate(rows):
            self._require_width(line, width)
            gene_id = self._require_token(line, 1, "gene id")
            if gene_id in seen_genes:
                raise DuplicateGene(gene_id, line.line_no, self.source)
            seen_genes.add(gene_id)
            gene_ids.append(gene_id)
            for column in range(2, width + 1):
                values[i, column - 2] = self._parse_value(line, column)

        return ExpressionMatrix(
            gene_ids=tuple(gene_ids),
            condition_labels=tuple(conditions),
            values=values,
        )

    def _parse_value(self, line: TsvLine, column: int) -> float:
        token = line.fields[column - 1]
        if not DECIMAL_PATTERN.match(token):
            raise NonNumericValue(line.line_no, column, token, self.source)
        value = float(token)
        if not np.isfinite(value) or value < 0:
            raise NegativeValue(line.line_no, column, token, self.source)
        return value


class KoMappingParser(TsvParser[KoMapping]):
    """``gene_id<TAB>KO_id`` lines; repeated genes accumulate."""

    input_kind = InputKind.KO_MAPPING

    def build(self, context: ParseContext, lines: list[TsvLine]) -> KoMapping:
        entries: dict[str, set[str]] = {}
        for line in lines:
            self._require_width(line, 2)
            gene_id = self._require_token(line, 1, "gene id")
            ko = line.fields[1]
            if not KO_PATTERN.match(ko):
                raise MalformedKoId(line.line_no, ko, self.source)
            entries.setdefault(gene_id, set()).add(ko)
        return KoMapping(entries={g: frozenset(kos) for g, kos in entries.items()})


class CandidateListParser(TsvParser[list[CandidateSet]]):
    """``label<TAB>gene_id`` lines grouped by label in order of first appearance."""

    input_kind = InputKind.CANDIDATES

    def build(self, context: ParseContext, lines: list[TsvLine]) -> list[CandidateSet]:
        groups: dict[str, set[str]] = {}
        for line in lines:
            self._require_width(line, 2)
            label = self._require_token(line, 1, "label")
            gene_id = self._require_token(line, 2, "gene id")
            groups.setdefault(label, set()).add(gene_id)
        return [CandidateSet(label=label, genes=frozenset(genes)) for label, genes in groups.items()]


class GoAnnotationParser(TsvParser[GoAnnotation]):
    """
    ``gene_id<TAB>GO_id<TAB>namespace[<TAB>name]`` lines.

    An optional ``#namespaces: BP,MF,CC`` comment declares the namespace set.
    """

    input_kind = InputKind.GO_ANNOTATION

    def build(self, context: ParseContext, lines: list[TsvLine]) -> GoAnnotation:
        declared = self._declared_namespaces(context)

        gene_terms: dict[str, set[str]] = {}
        names: dict[str, str] = {}
        namespaces: dict[str, tuple[str, int]] = {}

        for line in lines:
            self._require_width(line, (3, 4))
            gene_id = self._require_token(line, 1, "gene id")
            term_id = self._require_token(line, 2, "term id")
            namespace = self._require_token(line, 3, "namespace")

            if declared and namespace not in declared:
                raise UnknownNamespace(namespace, list(declared), line.line_no, self.source)

            if term_id in namespaces and namespaces[term_id][0] != namespace:
                raise ConflictingNamespace(
                    term_id, namespaces[term_id][0], namespace, line.line_no, self.source
                )
            namespaces.setdefault(term_id, (namespace, line.line_no))

            name = line.fields[3] if len(line.fields) == 4 else ""
            if name and term_id not in names:
                names[term_id] = name

            gene_terms.setdefault(gene_id, set()).add(term_id)

        term_meta = {
            term_id: GoTerm(term_id=term_id, name=names.get(term_id, term_id), namespace=ns)
            for term_id, (ns, _) in namespaces.items()
        }
        return GoAnnotation(
            gene_terms={g: frozenset(t) for g, t in gene_terms.items()},
            term_meta=term_meta,
            namespaces=declared,
        )

    def _declared_namespaces(self, context: ParseContext) -> tuple[str, ...]:
        found = context.comment_value("namespaces")
        if found is None:
            return ()
        line_no, value = found
        declared = tuple(ns.strip() for ns in value.split(",") if ns.strip())
        if not declared:
            raise InputParseError("empty namespaces declaration", line_no, self.source)
        return declared
