"""
Pipeline configuration module.

This module provides the run configuration composed from the cache, KEGG,
enrichment, profile and rendering settings.
"""

from pipeline.config.pipeline import KNOWN_KEYS, RunConfig, RunMode

__all__ = [
    "KNOWN_KEYS",
    "RunConfig",
    "RunMode",
]
