import logging
from dataclasses import dataclass, field
from pathlib import Path

from core.models.expression import CandidateSet, ExpressionMatrix, GoAnnotation, KoMapping
from core.models.pathways import Pathway
from core.models.reports import RunReport
from pipeline.config import RunConfig
from services.parsers import (
    parse_candidate_lists,
    parse_expression_table,
    parse_go_annotation,
    parse_ko_mapping,
)
from utils.exceptions import IoError

logger = logging.getLogger(__name__)


@dataclass
class RunInputs:
    """The four parsed user inputs."""

    matrix: ExpressionMatrix
    mapping: KoMapping
    candidates: list[CandidateSet] = field(default_factory=list)
    annotation: GoAnnotation | None = None


def read_input(path: Path) -> bytes:
    """
    Read an input file.

    Raises:
        IoError: If the file is missing or unreadable
    """
    try:
        return path.read_bytes()
    except OSError as e:
        raise IoError(str(path), e.strerror or str(e)) from e


def load_inputs(config: RunConfig, report: RunReport) -> RunInputs:
    """
    Parse every configured input and record cross-file warnings.

    Parse errors propagate unchanged; they already name file and line.
    """
    matrix = parse_expression_table(read_input(config.expr), source=str(config.expr))
    mapping = parse_ko_mapping(read_input(config.ko_map), source=str(config.ko_map))
    logger.info(
        f"Loaded {len(matrix.gene_ids)} genes x {len(matrix.condition_labels)} conditions, "
        f"{len(mapping.entries)} KO-mapped genes"
    )

    candidates: list[CandidateSet] = []
    if config.candidates is not None:
        candidates = parse_candidate_lists(
            read_input(config.candidates), source=str(config.candidates)
        )
        logger.info(f"Loaded {len(candidates)} candidate sets")

    annotation = None
    if config.go is not None:
        annotation = parse_go_annotation(read_input(config.go), source=str(config.go))
        logger.info(
            f"Loaded GO annotation: {len(annotation.term_meta)} terms in "
            f"namespaces {list(annotation.namespaces)}"
        )

    inputs = RunInputs(
        matrix=matrix, mapping=mapping, candidates=candidates, annotation=annotation
    )
    for message in cross_file_warnings(inputs):
        logger.warning(message)
        report.warn(message)
    return inputs


def cross_file_warnings(inputs: RunInputs) -> list[str]:
    """Consistency findings between inputs that do not stop the run."""
    universe = inputs.matrix.universe
    warnings = []

    unmeasured = sorted(set(inputs.mapping.entries) - universe)
    if unmeasured:
        warnings.append(
            f"{len(unmeasured)} KO-mapped genes are absent from the expression matrix "
            f"(first: {unmeasured[0]})"
        )

    for candidate in inputs.candidates:
        absent = sorted(candidate.genes - universe)
        if absent:
            warnings.append(
                f"candidate set '{candidate.label}': {len(absent)} genes absent from the "
                f"expression matrix (first: {absent[0]})"
            )
        if candidate.label not in inputs.matrix.condition_labels:
            warnings.append(
                f"candidate set '{candidate.label}' matches no condition; "
                f"it is outlined in every condition"
            )

    if inputs.annotation is not None:
        unannotated = sorted(set(inputs.annotation.gene_terms) - universe)
        if unannotated:
            warnings.append(
                f"{len(unannotated)} GO-annotated genes are absent from the expression "
                f"matrix (first: {unannotated[0]})"
            )
    return warnings


def pathways_with_universe_genes(
    pathways: list[Pathway], mapping: KoMapping, universe: frozenset[str]
) -> list[Pathway]:
    """Pathways containing at least one measured gene."""
    measured_kos = set(mapping.genes_by_ko(restrict_to=universe))
    return [p for p in pathways if p.ko_ids & measured_kos]
