"""
Time-series expression profiles.

Each gene's ordered series is reduced to Up / Down / EE calls between
consecutive time points; genes with at least one non-EE call are grouped by
their hyphen-joined profile key.
"""

import logging
import math
from collections.abc import Mapping, Sequence
from typing import Protocol

import numpy as np
from scipy import stats

from core.config.services import ProfileConfig
from core.models.enrichment import NamespaceEnrichment
from core.models.expression import ExpressionMatrix, GoAnnotation
from core.models.profiles import Direction, ProfileAssignment, TimeSeriesDesign, TransitionCall
from services.enrichment_service import EnrichmentService
from utils.exceptions import EmptyReplicateGroup, TooFewTimePoints

logger = logging.getLogger(__name__)


class TransitionClassifier(Protocol):
    """Decides the call between two consecutive replicate groups."""

    def classify(self, before: Sequence[float], after: Sequence[float]) -> TransitionCall: ...


class FoldChangeClassifier:
    """Thresholded log2 fold change of group means, optionally gated by a Welch test."""

    def __init__(self, config: ProfileConfig | None = None):
        self.config = config or ProfileConfig()

    def classify(self, before: Sequence[float], after: Sequence[float]) -> TransitionCall:
        fold_change = self.log2_fold_change(float(np.mean(before)), float(np.mean(after)))

        if fold_change >= self.config.fc_threshold:
            direction = Direction.UP
        elif fold_change <= -self.config.fc_threshold:
            direction = Direction.DOWN
        else:
            direction = Direction.EE

        if direction is not Direction.EE and self._test_applies(before, after):
            if not self._replicates_differ(before, after):
                direction = Direction.EE

        return TransitionCall(
            direction=direction,
            log2_fold_change=fold_change,
            passed_significance=direction is not Direction.EE,
        )

    def log2_fold_change(self, mean_before: float, mean_after: float) -> float:
        eps = self.config.pseudocount
        numerator, denominator = mean_after + eps, mean_before + eps
        if denominator == 0.0:
            return 0.0 if numerator == 0.0 else math.inf
        if numerator == 0.0:
            return -math.inf
        return math.log2(numerator / denominator)

    def _test_applies(self, before: Sequence[float], after: Sequence[float]) -> bool:
        return self.config.replicate_test and len(before) >= 2 and len(after) >= 2

    def _replicates_differ(self, before: Sequence[float], after: Sequence[float]) -> bool:
        eps = self.config.pseudocount
        with np.errstate(divide="ignore", invalid="ignore"):
            log_before = np.log2(np.asarray(before, dtype=np.float64) + eps)
            log_after = np.log2(np.asarray(after, dtype=np.float64) + eps)
            p_value = stats.ttest_ind(log_before, log_after, equal_var=False).pvalue
        # NaN (e.g. -inf logs of zero abundances) never passes
        return bool(p_value < self.config.test_alpha)


def classify_gene(
    values_by_timepoint: Sequence[Sequence[float]],
    config: ProfileConfig | None = None,
    gene_id: str = "",
    time_points: Sequence[str] | None = None,
    classifier: TransitionClassifier | None = None,
) -> ProfileAssignment:
    """
    Profile of one gene from its per-time-point replicate groups.

    Raises:
        TooFewTimePoints: Fewer than two groups
        EmptyReplicateGroup: A group has no values
    """
    if len(values_by_timepoint) < 2:
        raise TooFewTimePoints(len(values_by_timepoint))
    for i, group in enumerate(values_by_timepoint):
        if len(group) == 0:
            raise EmptyReplicateGroup(time_points[i] if time_points else str(i))

    classifier = classifier or FoldChangeClassifier(config)
    calls = tuple(
        classifier.classify(before, after)
        for before, after in zip(values_by_timepoint, values_by_timepoint[1:], strict=False)
    )
    return ProfileAssignment(gene_id=gene_id, calls=calls)


def classify_matrix(
    matrix: ExpressionMatrix,
    design: TimeSeriesDesign,
    config: ProfileConfig | None = None,
    classifier: TransitionClassifier | None = None,
) -> list[ProfileAssignment]:
    """Assignments for every gene, in matrix order."""
    classifier = classifier or FoldChangeClassifier(config)
    columns = design.columns_by_time_point(matrix)
    assignments = []
    for gene_id in matrix.gene_ids:
        row = matrix.row(gene_id)
        groups = [[float(row[i]) for i in cols] for cols in columns]
        assignments.append(
            classify_gene(
                groups,
                gene_id=gene_id,
                time_points=design.time_points,
                classifier=classifier,
            )
        )
    return assignments


def group_profiles(
    matrix: ExpressionMatrix,
    design: TimeSeriesDesign,
    config: ProfileConfig | None = None,
    classifier: TransitionClassifier | None = None,
) -> dict[str, tuple[str, ...]]:
    """
    Profile key -> sorted gene ids, largest group first then by key.

    Genes whose calls are all EE are left out.
    """
    members: dict[str, list[str]] = {}
    flat = 0
    for assignment in classify_matrix(matrix, design, config, classifier):
        if assignment.is_flat:
            flat += 1
            continue
        members.setdefault(assignment.profile_key, []).append(assignment.gene_id)

    ordered = sorted(members.items(), key=lambda item: (-len(item[1]), item[0]))
    logger.info(
        f"Profiles: {len(ordered)} groups over {len(matrix.gene_ids) - flat} genes, "
        f"{flat} genes without a significant change"
    )
    return {key: tuple(sorted(genes)) for key, genes in ordered}


def profile_enrichment(
    groups: Mapping[str, Sequence[str]],
    annotation: GoAnnotation,
    universe: frozenset[str],
    alpha: float,
    service: EnrichmentService | None = None,
) -> dict[str, dict[str, NamespaceEnrichment]]:
    """GO enrichment of every profile group, each tested on its own."""
    service = service or EnrichmentService()
    return {
        key: service.go_enrichment(genes, annotation, universe, alpha)
        for key, genes in groups.items()
    }
