"""
Core module.

This module provides the foundational components of pathmap: configuration
and the domain models shared by every service.
"""

from core.config import (
    CacheConfig,
    EnrichmentConfig,
    ProfileConfig,
    RenderConfig,
)
from core.models import (
    AggregationStrategy,
    CandidateSet,
    ContingencyTable,
    EnrichmentResult,
    ExpressionMatrix,
    GoAnnotation,
    KoMapping,
    Pathway,
    PathwayId,
)

__all__ = [
    "AggregationStrategy",
    "CacheConfig",
    "CandidateSet",
    "ContingencyTable",
    "EnrichmentConfig",
    "EnrichmentResult",
    "ExpressionMatrix",
    "GoAnnotation",
    "KoMapping",
    "Pathway",
    "PathwayId",
    "ProfileConfig",
    "RenderConfig",
]
