"""Parser-related models."""

from enum import Enum


class InputKind(str, Enum):
    """Kinds of user-supplied TSV inputs."""

    EXPRESSION = "expression"
    KO_MAPPING = "ko_mapping"
    CANDIDATES = "candidates"
    GO_ANNOTATION = "go_annotation"
