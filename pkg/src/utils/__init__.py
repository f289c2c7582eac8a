"""
Utility modules for pathmap.

This module contains helpers shared across the services:
- The exception hierarchy
- PNG decoding and deterministic encoding
"""

from utils.exceptions import (
    ConfigurationError,
    DimensionMismatch,
    EmptyUniverse,
    EmptyValues,
    ImageDecodeError,
    InputParseError,
    IoError,
    KgmlError,
    PathmapError,
    ProfileError,
    StatisticsError,
)
from utils.images import decode_png, encode_png

__all__ = [
    "ConfigurationError",
    "DimensionMismatch",
    "EmptyUniverse",
    "EmptyValues",
    "ImageDecodeError",
    "InputParseError",
    "IoError",
    "KgmlError",
    "PathmapError",
    "ProfileError",
    "StatisticsError",
    "decode_png",
    "encode_png",
]
