from dataclasses import dataclass, field


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 counts of selected vs annotated genes over one universe."""

    a: int  # selected and annotated
    b: int  # selected, not annotated
    c: int  # annotated, not selected
    d: int  # neither

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d

    @property
    def selected(self) -> int:
        return self.a + self.b

    @property
    def annotated(self) -> int:
        return self.a + self.c

    @classmethod
    def from_sets(
        cls, selected: set[str] | frozenset[str], annotated: set[str], universe_size: int
    ) -> "ContingencyTable":
        a = len(selected & annotated)
        b = len(selected) - a
        c = len(annotated) - a
        return cls(a=a, b=b, c=c, d=universe_size - a - b - c)


@dataclass(frozen=True)
class EnrichmentResult:
    term_id: str
    term_name: str
    table: ContingencyTable
    p_value: float
    p_adjusted: float
    hit_genes: tuple[str, ...]

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0 or not 0.0 <= self.p_adjusted <= 1.0:
            raise ValueError(f"{self.term_id}: probabilities must lie in [0, 1]")
        if self.p_adjusted < self.p_value:
            raise ValueError(f"{self.term_id}: p_adjusted must be >= p_value")
        if len(self.hit_genes) != self.table.a:
            raise ValueError(f"{self.term_id}: hit_genes must have table.a members")

    @property
    def sort_key(self) -> tuple[float, str]:
        return (self.p_adjusted, self.term_id)

    def passes(self, alpha: float) -> bool:
        """Adjusted p below the cutoff; a cutoff of 1 keeps every result."""
        return alpha >= 1.0 or self.p_adjusted < alpha


@dataclass(frozen=True)
class NamespaceEnrichment:
    """All tests of one GO namespace plus the subset passing the cutoff."""

    namespace: str
    alpha: float
    results: tuple[EnrichmentResult, ...] = field(default_factory=tuple)

    @property
    def significant(self) -> tuple[EnrichmentResult, ...]:
        return tuple(r for r in self.results if r.passes(self.alpha))
