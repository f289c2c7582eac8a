from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum

from core.models.expression import ExpressionMatrix
from utils.exceptions import DesignError, TooFewTimePoints


class Direction(str, Enum):
    UP = "Up"
    DOWN = "Down"
    EE = "EE"


@dataclass(frozen=True)
class TransitionCall:
    direction: Direction
    log2_fold_change: float
    passed_significance: bool

    def __post_init__(self):
        if (self.direction is Direction.EE) == self.passed_significance:
            raise ValueError("direction must be EE exactly when the call did not pass")


@dataclass(frozen=True)
class ProfileAssignment:
    gene_id: str
    calls: tuple[TransitionCall, ...]

    @property
    def profile_key(self) -> str:
        return "-".join(call.direction.value for call in self.calls)

    @property
    def is_flat(self) -> bool:
        """True when no transition passed (all EE)."""
        return all(call.direction is Direction.EE for call in self.calls)


@dataclass(frozen=True)
class TimeSeriesDesign:
    """Ordered time points; ``replicates`` maps matrix column -> time point."""

    time_points: tuple[str, ...]
    replicates: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.time_points) < 2:
            raise TooFewTimePoints(len(self.time_points))
        if len(set(self.time_points)) != len(self.time_points):
            raise DesignError(f"time points must be distinct: {list(self.time_points)}")
        unknown = sorted(set(self.replicates.values()) - set(self.time_points))
        if unknown:
            raise DesignError(f"replicate columns reference unknown time points {unknown}")

    def columns_by_time_point(self, matrix: ExpressionMatrix) -> list[list[int]]:
        """Matrix column indices for each time point, in time order."""
        labels = matrix.condition_labels
        missing = sorted(c for c in self.replicates if c not in labels)
        if missing:
            raise DesignError(f"replicate columns not in matrix: {missing}")

        groups: list[list[int]] = []
        for time_point in self.time_points:
            columns = [c for c, tp in self.replicates.items() if tp == time_point]
            if not columns:
                if time_point not in labels:
                    raise DesignError(f"time point '{time_point}' is not a matrix column")
                columns = [time_point]
            groups.append(sorted(labels.index(c) for c in columns))
        return groups
