from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from core.models.pathways import Pathway

RGB = tuple[int, int, int]

CANDIDATE_OUTLINE_COLOR: RGB = (255, 0, 0)


class AggregationStrategy(str, Enum):
    MEAN = "mean"
    MAX = "max"
    SUM = "sum"


@dataclass(frozen=True)
class QuantileScale:
    n_bins: int
    breakpoints: tuple[float, ...]
    colors: tuple[RGB, ...]

    def __post_init__(self):
        if self.n_bins < 2:
            raise ValueError("n_bins must be at least 2")
        if len(self.breakpoints) != self.n_bins - 1:
            raise ValueError("breakpoints must have n_bins - 1 values")
        if any(b > a for a, b in zip(self.breakpoints[1:], self.breakpoints, strict=False)):
            raise ValueError("breakpoints must be non-decreasing")
        if len(self.colors) != self.n_bins:
            raise ValueError("colors must have n_bins entries")


@dataclass(frozen=True)
class OverlaySpec:
    """Everything needed to paint one pathway diagram."""

    pathway: Pathway
    base_image: bytes
    condition_labels: tuple[str, ...]
    values: Mapping[str, Sequence[float]]
    scale: QuantileScale
    candidates: Mapping[str, Sequence[bool]] = field(default_factory=dict)
    aggregation: AggregationStrategy = AggregationStrategy.MEAN

    def __post_init__(self):
        known = self.pathway.ko_ids
        stray = sorted(set(self.values) - known)
        if stray:
            raise ValueError(f"display values for KOs absent from {self.pathway.id}: {stray}")
        for ko, row in self.values.items():
            if len(row) != len(self.condition_labels):
                raise ValueError(f"{ko}: expected {len(self.condition_labels)} values")

    def is_candidate(self, ko: str) -> bool:
        return any(self.candidates.get(ko, ()))
