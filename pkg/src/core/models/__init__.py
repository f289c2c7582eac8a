"""
Core models module.

This module provides domain models for expression inputs, KEGG pathways,
enrichment results, time-series profiles and overlay rendering.
"""

from core.models.enrichment import (
    ContingencyTable,
    EnrichmentResult,
    NamespaceEnrichment,
)
from core.models.expression import (
    CandidateSet,
    ExpressionMatrix,
    GoAnnotation,
    GoTerm,
    KoMapping,
)
from core.models.parsers import InputKind
from core.models.pathways import (
    EntryKind,
    GraphicsBox,
    Pathway,
    PathwayEntry,
    PathwayId,
    ShapeKind,
)
from core.models.profiles import (
    Direction,
    ProfileAssignment,
    TimeSeriesDesign,
    TransitionCall,
)
from core.models.rendering import AggregationStrategy, OverlaySpec, QuantileScale
from core.models.reports import RunReport

__all__ = [
    "AggregationStrategy",
    "CandidateSet",
    "ContingencyTable",
    "Direction",
    "EnrichmentResult",
    "EntryKind",
    "ExpressionMatrix",
    "GoAnnotation",
    "GoTerm",
    "GraphicsBox",
    "InputKind",
    "KoMapping",
    "NamespaceEnrichment",
    "OverlaySpec",
    "Pathway",
    "PathwayEntry",
    "PathwayId",
    "ProfileAssignment",
    "QuantileScale",
    "RunReport",
    "ShapeKind",
    "TimeSeriesDesign",
    "TransitionCall",
]
