"""
Pathway diagram overlays.

Every ortholog box with data is split into one vertical stripe per condition,
filled with the quantile-bin color of that condition's value. Candidate KOs
get a red frame around the whole box, and a color-bar legend band is appended
below the diagram.
"""

import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
from PIL import Image, ImageDraw, ImageFont

from core.models.expression import CandidateSet, ExpressionMatrix, KoMapping
from core.models.pathways import GraphicsBox, Pathway, ShapeKind
from core.models.rendering import (
    CANDIDATE_OUTLINE_COLOR,
    RGB,
    AggregationStrategy,
    OverlaySpec,
    QuantileScale,
)
from utils.exceptions import DimensionMismatch, EmptyValues
from utils.images import decode_png, encode_png

logger = logging.getLogger(__name__)

# Sequential palettes, light -> dark
PALETTES: dict[str, tuple[str, ...]] = {
    "ylorrd": ("#ffffb2", "#fecc5c", "#fd8d3c", "#f03b20", "#bd0026"),
    "viridis": ("#fde725", "#5ec962", "#21918c", "#3b528b", "#440154"),
    "blues": ("#eff3ff", "#bdd7e7", "#6baed6", "#3182bd", "#08519c"),
}

LEGEND_BACKGROUND: RGB = (255, 255, 255)
LEGEND_TEXT: RGB = (0, 0, 0)
LEGEND_MARGIN = 8
SWATCH_MAX_WIDTH = 40
SWATCH_HEIGHT = 14


@dataclass(frozen=True)
class PixelBox:
    """Inclusive pixel extent of a diagram box."""

    x0: int
    y0: int
    x1: int
    y1: int

    @classmethod
    def from_graphics(cls, box: GraphicsBox, width: int, height: int) -> "PixelBox":
        return cls(
            x0=max(0, math.floor(box.left)),
            y0=max(0, math.floor(box.top)),
            x1=min(width - 1, math.floor(box.right)),
            y1=min(height - 1, math.floor(box.bottom)),
        )

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1


def palette_colors(name: str, n_bins: int) -> tuple[RGB, ...]:
    """``n_bins`` colors sampled evenly along a named palette."""
    if name not in PALETTES:
        raise ValueError(f"Unknown palette '{name}'. Available: {sorted(PALETTES)}")
    anchors = np.array([_hex_to_rgb(h) for h in PALETTES[name]], dtype=np.float64)
    positions = np.linspace(0.0, 1.0, len(anchors))
    targets = np.linspace(0.0, 1.0, n_bins)
    channels = [np.interp(targets, positions, anchors[:, i]) for i in range(3)]
    return tuple(
        (int(round(r)), int(round(g)), int(round(b)))
        for r, g, b in zip(*channels, strict=True)
    )


def build_quantile_scale(
    all_values: Iterable[float], n_bins: int = 5, palette: str = "ylorrd"
) -> QuantileScale:
    """
    Breakpoints at the j/n_bins quantiles of the global value distribution.

    Raises:
        EmptyValues: If no finite value is given
    """
    values = np.asarray(list(all_values), dtype=np.float64).ravel()
    values = values[np.isfinite(values)]
    if values.size == 0:
        raise EmptyValues()
    if n_bins < 2:
        raise ValueError("n_bins must be at least 2")

    probabilities = [j / n_bins for j in range(1, n_bins)]
    breakpoints = np.quantile(values, probabilities, method="linear")
    return QuantileScale(
        n_bins=n_bins,
        breakpoints=tuple(float(b) for b in breakpoints),
        colors=palette_colors(palette, n_bins),
    )


def bin_of(value: float, scale: QuantileScale) -> int:
    """Number of breakpoints strictly below ``value``; ties go to the lower bin."""
    return int(np.searchsorted(np.asarray(scale.breakpoints), value, side="left"))


def aggregate_ko_value(
    values: Sequence[float], strategy: AggregationStrategy = AggregationStrategy.MEAN
) -> float:
    """Combine the values of all genes mapped to one KO in one condition."""
    if len(values) == 0:
        raise ValueError("at least one contributing value is required")
    array = np.asarray(values, dtype=np.float64)
    match strategy:
        case AggregationStrategy.MAX:
            return float(array.max())
        case AggregationStrategy.SUM:
            return float(array.sum())
        case _:
            return float(array.mean())


def ko_display_values(
    pathway: Pathway,
    matrix: ExpressionMatrix,
    mapping: KoMapping,
    strategy: AggregationStrategy = AggregationStrategy.MEAN,
) -> dict[str, list[float]]:
    """Per-condition display values for every pathway KO with measured genes."""
    genes_by_ko = mapping.genes_by_ko(restrict_to=matrix.universe)
    display: dict[str, list[float]] = {}
    for ko in sorted(pathway.ko_ids):
        genes = sorted(genes_by_ko.get(ko, ()))
        if not genes:
            continue
        rows = np.vstack([matrix.row(g) for g in genes])
        display[ko] = [
            aggregate_ko_value(rows[:, c], strategy) for c in range(len(matrix.condition_labels))
        ]
    return display


def candidate_flags(
    pathway: Pathway,
    candidates: Sequence[CandidateSet],
    mapping: KoMapping,
    condition_labels: Sequence[str],
) -> dict[str, list[bool]]:
    """
    Per-condition candidate flags for pathway KOs.

    A set labelled like a condition flags that condition only; any other
    label flags every condition.
    """
    flags: dict[str, list[bool]] = {}
    pathway_kos = pathway.ko_ids
    for candidate in candidates:
        if candidate.label in condition_labels:
            columns = [condition_labels.index(candidate.label)]
        else:
            columns = list(range(len(condition_labels)))
        for gene_id in candidate.genes:
            for ko in mapping.kos_of(gene_id) & pathway_kos:
                row = flags.setdefault(ko, [False] * len(condition_labels))
                for c in columns:
                    row[c] = True
    return flags


def missing_kos(pathway: Pathway, display_values: Mapping[str, Sequence[float]]) -> list[str]:
    """Pathway KOs left unpainted for lack of data."""
    return sorted(pathway.ko_ids - set(display_values))


def stripe_extents(box: PixelBox, n_conditions: int) -> list[tuple[int, int]]:
    """
    Inclusive x ranges of the condition stripes, left to right.

    Stripes are ``width // n`` wide and the rightmost absorbs the remainder.
    A box narrower than the condition count keeps one 1-px stripe per column.
    """
    total = box.width
    if total < n_conditions:
        return [(x, x) for x in range(box.x0, box.x1 + 1)]
    stripe = total // n_conditions
    extents = [
        (box.x0 + i * stripe, box.x0 + (i + 1) * stripe - 1) for i in range(n_conditions)
    ]
    extents[-1] = (extents[-1][0], box.x1)
    return extents


def legend_swatch_boxes(
    image_width: int, image_height: int, n_bins: int
) -> list[tuple[int, int, int, int]]:
    """Inclusive (x0, y0, x1, y1) of each legend swatch on the extended canvas."""
    swatch_width = max(1, min(SWATCH_MAX_WIDTH, (image_width - 2 * LEGEND_MARGIN) // n_bins))
    y0 = image_height + 4
    return [
        (
            LEGEND_MARGIN + i * swatch_width,
            y0,
            LEGEND_MARGIN + (i + 1) * swatch_width - 1,
            y0 + SWATCH_HEIGHT - 1,
        )
        for i in range(n_bins)
    ]


def render_overlay(
    spec: OverlaySpec,
    legend_height: int = 48,
    outline_width: int = 2,
    warnings: list[str] | None = None,
) -> bytes:
    """
    Paint one pathway diagram and return the PNG bytes.

    Boxes too narrow for one stripe per condition are painted with the
    stripes that fit; a StripeTooNarrow message is appended to ``warnings``
    when given.

    Raises:
        ImageDecodeError: Base image does not decode
        DimensionMismatch: Pathway boxes exceed the base image
    """
    pathway_key = str(spec.pathway.id)
    diagram = decode_png(spec.base_image, source=pathway_key)
    width, height = diagram.size

    out_of_bounds = spec.pathway.out_of_bounds_entries(width, height)
    if out_of_bounds:
        raise DimensionMismatch(str(out_of_bounds[0]), (width, height), pathway_key)

    draw = ImageDraw.Draw(diagram)
    n_conditions = len(spec.condition_labels)
    outlined: list[PixelBox] = []

    for entry in spec.pathway.gene_entries():
        boxes = [
            PixelBox.from_graphics(g, width, height)
            for g in entry.graphics
            if g.shape is ShapeKind.RECTANGLE
        ]
        if not boxes:
            continue

        row = _entry_values(entry.ko_ids, spec)
        if row is not None:
            colors = [spec.scale.colors[bin_of(v, spec.scale)] for v in row]
            for box in boxes:
                message = _paint_stripes(draw, box, colors)
                if message is not None:
                    message = f"StripeTooNarrow: {pathway_key} entry {entry.entry_id} {message}"
                    logger.warning(message)
                    if warnings is not None:
                        warnings.append(message)

        if any(spec.is_candidate(ko) for ko in entry.ko_ids):
            outlined.extend(boxes)

    # Outlines after all fills so neighbouring stripes never cover them
    for box in outlined:
        draw.rectangle(
            [
                box.x0 - outline_width,
                box.y0 - outline_width,
                box.x1 + outline_width,
                box.y1 + outline_width,
            ],
            outline=CANDIDATE_OUTLINE_COLOR,
            width=outline_width,
        )

    canvas = Image.new("RGB", (width, height + legend_height), LEGEND_BACKGROUND)
    canvas.paste(diagram, (0, 0))
    _draw_legend(canvas, spec, width, height)

    logger.debug(
        f"Rendered {pathway_key}: {len(spec.values)} KOs with data, "
        f"{len(outlined)} outlined boxes, {n_conditions} conditions"
    )
    return encode_png(canvas)


def _entry_values(ko_ids: frozenset[str], spec: OverlaySpec) -> list[float] | None:
    rows = [spec.values[ko] for ko in sorted(ko_ids) if ko in spec.values]
    if not rows:
        return None
    if len(rows) == 1:
        return [float(v) for v in rows[0]]
    return [
        aggregate_ko_value([r[c] for r in rows], spec.aggregation)
        for c in range(len(spec.condition_labels))
    ]


def _paint_stripes(draw: ImageDraw.ImageDraw, box: PixelBox, colors: list[RGB]) -> str | None:
    """Fill ``box`` with one stripe per color; describes any dropped stripes."""
    extents = stripe_extents(box, len(colors))
    for (x0, x1), color in zip(extents, colors, strict=False):
        draw.rectangle([x0, box.y0, x1, box.y1], fill=color)
    if len(extents) < len(colors):
        return (
            f"is {box.width} px wide for {len(colors)} conditions; "
            f"{len(colors) - len(extents)} conditions not drawn"
        )
    return None


def _draw_legend(canvas: Image.Image, spec: OverlaySpec, width: int, height: int) -> None:
    draw = ImageDraw.Draw(canvas)
    font = _legend_font()
    swatches = legend_swatch_boxes(width, height, spec.scale.n_bins)

    for (x0, y0, x1, y1), color in zip(swatches, spec.scale.colors, strict=True):
        draw.rectangle([x0, y0, x1, y1], fill=color)

    label_y = swatches[0][3] + 2
    for (_, _, x1, _), breakpoint in zip(swatches, spec.scale.breakpoints, strict=False):
        draw.text((x1 - 6, label_y), f"{breakpoint:.3g}", fill=LEGEND_TEXT, font=font)

    caption = "conditions: " + ", ".join(spec.condition_labels)
    draw.text((LEGEND_MARGIN, label_y + 12), caption, fill=LEGEND_TEXT, font=font)


def _legend_font() -> ImageFont.ImageFont:
    # Built-in bitmap font; TrueType fallbacks differ across platforms
    loader = getattr(ImageFont, "load_default_imagefont", None)
    if loader is not None:
        return loader()
    return ImageFont.load_default()


def _hex_to_rgb(value: str) -> RGB:
    value = value.lstrip("#")
    return (int(value[0:2], 16), int(value[2:4], 16), int(value[4:6], 16))
