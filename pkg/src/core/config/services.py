from dataclasses import dataclass

from core.models.rendering import AggregationStrategy

PALETTE_NAMES = ("ylorrd", "viridis", "blues")


@dataclass
class EnrichmentConfig:
    """Thresholds for pathway and GO enrichment."""

    alpha: float = 0.05
    expressed_threshold: float = 0.0

    def __post_init__(self):
        """Validate the significance cutoff."""
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")

        if self.expressed_threshold < 0:
            raise ValueError("expressed_threshold must be non-negative")


@dataclass
class ProfileConfig:
    """Transition classifier settings."""

    fc_threshold: float = 1.0  # log2 units, i.e. 2-fold
    pseudocount: float = 1.0
    replicate_test: bool = False
    test_alpha: float = 0.05

    def __post_init__(self):
        """Validate thresholds."""
        if self.fc_threshold <= 0:
            raise ValueError("fc_threshold must be positive")

        if self.pseudocount < 0:
            raise ValueError("pseudocount must be non-negative")

        if not 0.0 < self.test_alpha <= 1.0:
            raise ValueError("test_alpha must be in (0, 1]")


@dataclass
class RenderConfig:
    """Overlay rendering settings."""

    n_bins: int = 5
    palette: str = "ylorrd"
    aggregation: AggregationStrategy = AggregationStrategy.MEAN
    legend_height: int = 48
    outline_width: int = 2

    def __post_init__(self):
        """Normalize the aggregation strategy and validate ranges."""
        if isinstance(self.aggregation, str):
            try:
                self.aggregation = AggregationStrategy(self.aggregation.lower())
            except ValueError as e:
                raise ValueError(f"Invalid aggregation: {self.aggregation}") from e

        if self.n_bins < 2:
            raise ValueError("n_bins must be at least 2")

        if self.palette not in PALETTE_NAMES:
            raise ValueError(
                f"Invalid palette: {self.palette}. Must be one of {list(PALETTE_NAMES)}"
            )

        if self.legend_height <= 0 or self.outline_width <= 0:
            raise ValueError("legend_height and outline_width must be positive")
