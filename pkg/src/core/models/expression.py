"""Expression matrix and the gene-level annotation inputs."""

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

import numpy as np

KO_PATTERN = re.compile(r"^K\d{5}$")


@dataclass(frozen=True, eq=False)
class ExpressionMatrix:
    """Genes x ordered conditions of non-negative abundances."""

    gene_ids: tuple[str, ...]
    condition_labels: tuple[str, ...]
    values: np.ndarray
    _row_index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        """Validate shape, uniqueness and value domain; freeze the buffer."""
        if len(set(self.gene_ids)) != len(self.gene_ids):
            raise ValueError("gene_ids must be unique")
        if len(set(self.condition_labels)) != len(self.condition_labels):
            raise ValueError("condition_labels must be unique")

        values = np.asarray(self.values, dtype=np.float64)
        if values.size == 0:
            values = values.reshape(len(self.gene_ids), len(self.condition_labels))
        if values.shape != (len(self.gene_ids), len(self.condition_labels)):
            raise ValueError(
                f"values shape {values.shape} does not match "
                f"{len(self.gene_ids)}x{len(self.condition_labels)}"
            )
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("values must be finite and non-negative")

        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "_row_index", {gene: i for i, gene in enumerate(self.gene_ids)}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExpressionMatrix):
            return NotImplemented
        return (
            self.gene_ids == other.gene_ids
            and self.condition_labels == other.condition_labels
            and np.array_equal(self.values, other.values)
        )

    @property
    def universe(self) -> frozenset[str]:
        """All measured genes; the background for every enrichment test."""
        return frozenset(self.gene_ids)

    def row(self, gene_id: str) -> np.ndarray:
        return self.values[self._row_index[gene_id]]

    def to_tsv(self) -> str:
        """Serialize back to the canonical input format."""
        lines = ["\t".join(("gene_id", *self.condition_labels))]
        for gene_id, row in zip(self.gene_ids, self.values, strict=True):
            lines.append("\t".join((gene_id, *(repr(float(v)) for v in row))))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class KoMapping:
    """gene_id -> set of KEGG Orthology identifiers."""

    entries: Mapping[str, frozenset[str]]

    def __post_init__(self):
        for gene_id, kos in self.entries.items():
            for ko in kos:
                if not KO_PATTERN.match(ko):
                    raise ValueError(f"Invalid KO id '{ko}' for gene '{gene_id}'")

    def kos_of(self, gene_id: str) -> frozenset[str]:
        return self.entries.get(gene_id, frozenset())

    def genes_by_ko(self, restrict_to: Iterable[str] | None = None) -> dict[str, set[str]]:
        """Invert the mapping, optionally keeping only genes in ``restrict_to``."""
        allowed = set(restrict_to) if restrict_to is not None else None
        inverted: dict[str, set[str]] = {}
        for gene_id, kos in self.entries.items():
            if allowed is not None and gene_id not in allowed:
                continue
            for ko in kos:
                inverted.setdefault(ko, set()).add(gene_id)
        return inverted


@dataclass(frozen=True)
class CandidateSet:
    """Genes of interest for one condition or contrast."""

    label: str
    genes: frozenset[str]

    def __post_init__(self):
        if not self.label or not self.label.strip():
            raise ValueError("CandidateSet label cannot be empty")


@dataclass(frozen=True)
class GoTerm:
    term_id: str
    name: str
    namespace: str


@dataclass(frozen=True)
class GoAnnotation:
    """Gene -> GO terms, with per-term name and namespace."""

    gene_terms: Mapping[str, frozenset[str]]
    term_meta: Mapping[str, GoTerm]
    namespaces: tuple[str, ...] = ()

    def __post_init__(self):
        for gene_id, terms in self.gene_terms.items():
            missing = [t for t in terms if t not in self.term_meta]
            if missing:
                raise ValueError(f"Gene '{gene_id}' references unknown terms {missing}")
        if self.namespaces:
            for term in self.term_meta.values():
                if term.namespace not in self.namespaces:
                    raise ValueError(
                        f"Term '{term.term_id}' namespace '{term.namespace}' "
                        f"not in {list(self.namespaces)}"
                    )
        else:
            seen: list[str] = []
            for term in self.term_meta.values():
                if term.namespace not in seen:
                    seen.append(term.namespace)
            object.__setattr__(self, "namespaces", tuple(seen))

    def terms_in(self, namespace: str) -> list[GoTerm]:
        return sorted(
            (t for t in self.term_meta.values() if t.namespace == namespace),
            key=lambda t: t.term_id,
        )

    def genes_by_term(self, restrict_to: Iterable[str] | None = None) -> dict[str, set[str]]:
        allowed = set(restrict_to) if restrict_to is not None else None
        inverted: dict[str, set[str]] = {}
        for gene_id, terms in self.gene_terms.items():
            if allowed is not None and gene_id not in allowed:
                continue
            for term in terms:
                inverted.setdefault(term, set()).add(gene_id)
        return inverted
