"""KEGG pathway structures parsed from KGML."""

import re
from dataclasses import dataclass, field
from enum import Enum

PATHWAY_ID_PATTERN = re.compile(r"^(?P<org>[a-z]{2,4})(?P<number>\d{5})$")
ORG_CODE_PATTERN = re.compile(r"^[a-z]{2,4}$")

# KEGG art is occasionally off by a pixel or two
BOUNDS_TOLERANCE_PX = 2.0


@dataclass(frozen=True, order=True)
class PathwayId:
    """Organism code plus five-digit map number, e.g. ``ko00010``."""

    org_code: str
    number: str

    def __post_init__(self):
        if not ORG_CODE_PATTERN.match(self.org_code):
            raise ValueError(f"Invalid organism code: {self.org_code!r}")
        if not re.fullmatch(r"\d{5}", self.number):
            raise ValueError(f"Invalid pathway number: {self.number!r}")

    @classmethod
    def parse(cls, raw: str) -> "PathwayId":
        """Parse ``ko00010`` or ``path:ko00010``."""
        value = raw.strip()
        if value.startswith("path:"):
            value = value[len("path:") :]
        match = PATHWAY_ID_PATTERN.match(value)
        if not match:
            raise ValueError(f"Invalid pathway id: {raw!r}")
        return cls(org_code=match["org"], number=match["number"])

    def __str__(self) -> str:
        return f"{self.org_code}{self.number}"


class EntryKind(str, Enum):
    ORTHOLOG = "ortholog"
    GENE = "gene"
    COMPOUND = "compound"
    MAP = "map"
    OTHER = "other"

    @classmethod
    def from_label(cls, label: str) -> "EntryKind":
        try:
            kind = cls(label)
        except ValueError:
            return cls.OTHER
        return kind


class ShapeKind(str, Enum):
    RECTANGLE = "rectangle"
    CIRCLE = "circle"
    LINE = "line"
    OTHER = "other"

    @classmethod
    def from_label(cls, label: str) -> "ShapeKind":
        try:
            shape = cls(label)
        except ValueError:
            return cls.OTHER
        return shape


@dataclass(frozen=True)
class GraphicsBox:
    """Diagram box in image pixels; (center_x, center_y) from the top-left."""

    center_x: float
    center_y: float
    width: float
    height: float
    shape: ShapeKind
    shape_label: str = ""

    def __post_init__(self):
        if not self.shape_label:
            object.__setattr__(self, "shape_label", self.shape.value)
        if self.center_x < 0 or self.center_y < 0:
            raise ValueError("coordinates must be non-negative")
        if self.width < 0 or self.height < 0:
            raise ValueError("extents must be non-negative")
        if self.shape in (ShapeKind.RECTANGLE, ShapeKind.CIRCLE) and (
            self.width <= 0 or self.height <= 0
        ):
            raise ValueError(f"{self.shape.value} must have positive width and height")

    @property
    def left(self) -> float:
        return self.center_x - self.width / 2

    @property
    def right(self) -> float:
        return self.center_x + self.width / 2

    @property
    def top(self) -> float:
        return self.center_y - self.height / 2

    @property
    def bottom(self) -> float:
        return self.center_y + self.height / 2

    def fits_within(self, width: int, height: int) -> bool:
        tol = BOUNDS_TOLERANCE_PX
        return (
            self.left >= -tol
            and self.top >= -tol
            and self.right <= width + tol
            and self.bottom <= height + tol
        )


@dataclass(frozen=True)
class PathwayEntry:
    entry_id: int
    ko_ids: frozenset[str]
    kind: EntryKind
    graphics: tuple[GraphicsBox, ...] = ()
    kind_label: str = ""

    def __post_init__(self):
        if not self.kind_label:
            object.__setattr__(self, "kind_label", self.kind.value)
        carries_kos = self.kind in (EntryKind.ORTHOLOG, EntryKind.GENE)
        if carries_kos != bool(self.ko_ids):
            raise ValueError(
                f"Entry {self.entry_id}: ko_ids must be non-empty iff kind is "
                f"ortholog or gene (kind={self.kind.value}, ko_ids={sorted(self.ko_ids)})"
            )


@dataclass(frozen=True)
class Pathway:
    """A parsed pathway; image dimensions are 0 until the diagram is resolved."""

    id: PathwayId
    title: str
    entries: tuple[PathwayEntry, ...]
    image_width: int = 0
    image_height: int = 0
    _entry_ids: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ids = [entry.entry_id for entry in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Pathway {self.id}: duplicate entry ids")
        object.__setattr__(self, "_entry_ids", frozenset(ids))

    @property
    def ko_ids(self) -> frozenset[str]:
        """KOs referenced by ortholog/gene entries."""
        return frozenset(ko for entry in self.gene_entries() for ko in entry.ko_ids)

    def gene_entries(self) -> list[PathwayEntry]:
        return [
            e for e in self.entries if e.kind in (EntryKind.ORTHOLOG, EntryKind.GENE)
        ]

    def out_of_bounds_entries(self, width: int, height: int) -> list[int]:
        return [
            entry.entry_id
            for entry in self.entries
            if any(not box.fits_within(width, height) for box in entry.graphics)
        ]

    def entry_table(self) -> str:
        """One TSV row per (entry, graphics box); entries without graphics get '-'."""
        header = "entry_id\tkind\tko_ids\tshape\tx\ty\twidth\theight"
        rows = [header]
        for entry in sorted(self.entries, key=lambda e: e.entry_id):
            kos = ",".join(sorted(entry.ko_ids)) or "-"
            prefix = f"{entry.entry_id}\t{entry.kind_label}\t{kos}"
            if not entry.graphics:
                rows.append(f"{prefix}\t-\t-\t-\t-\t-")
                continue
            for box in entry.graphics:
                rows.append(
                    f"{prefix}\t{box.shape_label}\t{box.center_x:g}\t{box.center_y:g}"
                    f"\t{box.width:g}\t{box.height:g}"
                )
        return "\n".join(rows) + "\n"
