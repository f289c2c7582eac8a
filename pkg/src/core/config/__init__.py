"""
Core configuration module.

This module provides configuration classes for cache locations and the
statistics, profile and rendering services.
"""

from core.config.services import (
    PALETTE_NAMES,
    EnrichmentConfig,
    ProfileConfig,
    RenderConfig,
)
from core.config.system import CacheConfig

__all__ = [
    "PALETTE_NAMES",
    "CacheConfig",
    "EnrichmentConfig",
    "ProfileConfig",
    "RenderConfig",
]
