"""
Service layer for pathmap.

This module contains the services the pipeline composes:
- Cache-first KEGG pathway retrieval
- Exact enrichment statistics (pathways and GO namespaces)
- Time-series profile classification
- Pathway overlay rendering
- TSV reports and staged output
"""

from services.enrichment_service import EnrichmentService
from services.kegg_service import KeggService
from services.profile_service import (
    FoldChangeClassifier,
    classify_gene,
    group_profiles,
    profile_enrichment,
)
from services.render_service import (
    aggregate_ko_value,
    bin_of,
    build_quantile_scale,
    render_overlay,
)
from services.statistics import bh_adjust, fisher_exact_greater, hypergeometric_pmf

__all__ = [
    "EnrichmentService",
    "FoldChangeClassifier",
    "KeggService",
    "aggregate_ko_value",
    "bh_adjust",
    "bin_of",
    "build_quantile_scale",
    "classify_gene",
    "fisher_exact_greater",
    "group_profiles",
    "hypergeometric_pmf",
    "profile_enrichment",
    "render_overlay",
]
