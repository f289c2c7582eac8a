import io
import logging
import math

import numpy as np
import pytest
from conftest import blank_png
from PIL import Image

from core.models.expression import CandidateSet, ExpressionMatrix, KoMapping
from core.models.pathways import (
    EntryKind,
    GraphicsBox,
    Pathway,
    PathwayEntry,
    PathwayId,
    ShapeKind,
)
from core.models.rendering import AggregationStrategy, OverlaySpec, QuantileScale
from services.render_service import (
    PixelBox,
    aggregate_ko_value,
    bin_of,
    build_quantile_scale,
    candidate_flags,
    ko_display_values,
    legend_swatch_boxes,
    missing_kos,
    palette_colors,
    render_overlay,
    stripe_extents,
)
from utils.exceptions import DimensionMismatch, EmptyValues, ImageDecodeError

RED = (255, 0, 0)
WHITE = (255, 255, 255)
YLORRD = ((255, 255, 178), (254, 204, 92), (253, 141, 60), (240, 59, 32), (189, 0, 38))
SCALE = QuantileScale(n_bins=5, breakpoints=(1.0, 2.0, 3.0, 4.0), colors=YLORRD)


def pixels(png: bytes) -> np.ndarray:
    return np.asarray(Image.open(io.BytesIO(png)).convert("RGB"))


def single_box_pathway(
    kos: set[str] | None = None,
    shape: ShapeKind = ShapeKind.RECTANGLE,
) -> Pathway:
    entry = PathwayEntry(
        entry_id=1,
        ko_ids=frozenset(kos or {"K00001"}),
        kind=EntryKind.ORTHOLOG,
        graphics=(GraphicsBox(50, 50, 20, 10, shape),),
    )
    return Pathway(id=PathwayId("ko", "00001"), title="box", entries=(entry,))


def overlay(pathway: Pathway, values, candidates=None, labels=("c1",), **kwargs) -> OverlaySpec:
    return OverlaySpec(
        pathway=pathway,
        base_image=blank_png(100, 100),
        condition_labels=labels,
        values=values,
        scale=SCALE,
        candidates=candidates or {},
        **kwargs,
    )


class TestRenderOverlay:
    def test_single_condition_fills_whole_box(self):
        image = pixels(render_overlay(overlay(single_box_pathway(), {"K00001": [10.0]})))

        assert image.shape == (148, 100, 3)
        box = image[45:56, 40:61]
        assert (box == YLORRD[4]).all()

        diagram = image[:100].copy()
        diagram[45:56, 40:61] = WHITE
        assert (diagram == WHITE).all()

    def test_two_conditions_split_into_stripes(self):
        spec = overlay(single_box_pathway(), {"K00001": [0.5, 10.0]}, labels=("c1", "c2"))

        image = pixels(render_overlay(spec))

        # 21 px box: 10 px left stripe, right stripe absorbs the remainder
        assert (image[45:56, 40:50] == YLORRD[0]).all()
        assert (image[45:56, 50:61] == YLORRD[4]).all()

    def test_candidate_outline(self):
        spec = overlay(single_box_pathway(), {"K00001": [10.0]}, candidates={"K00001": [True]})

        image = pixels(render_overlay(spec))

        assert (image[44:57, 39] == RED).all()
        assert (image[44:57, 61] == RED).all()
        assert (image[44, 39:62] == RED).all()
        assert (image[56, 39:62] == RED).all()
        assert (image[45:56, 40:61] == YLORRD[4]).all()

    def test_candidate_without_data_is_outlined_only(self):
        spec = overlay(single_box_pathway(), {}, candidates={"K00001": [True]})

        image = pixels(render_overlay(spec))

        assert (image[44:57, 39] == RED).all()
        assert (image[45:56, 40:61] == WHITE).all()

    def test_unflagged_candidate_row_draws_no_outline(self):
        spec = overlay(single_box_pathway(), {"K00001": [10.0]}, candidates={"K00001": [False]})

        image = pixels(render_overlay(spec))

        assert not (image[:100] == RED).all(axis=2).any()

    def test_ko_without_data_is_untouched(self):
        image = pixels(render_overlay(overlay(single_box_pathway(), {})))

        assert (image[:100] == WHITE).all()

    def test_non_rectangle_graphics_are_not_painted(self):
        pathway = single_box_pathway(shape=ShapeKind.CIRCLE)

        image = pixels(render_overlay(overlay(pathway, {"K00001": [10.0]})))

        assert (image[:100] == WHITE).all()

    @pytest.mark.parametrize(
        "strategy, expected_bin",
        [(AggregationStrategy.MEAN, 2), (AggregationStrategy.MAX, 4), (AggregationStrategy.SUM, 4)],
    )
    def test_multi_ko_entry_uses_aggregation(self, strategy, expected_bin):
        pathway = single_box_pathway({"K00001", "K00002"})
        spec = overlay(pathway, {"K00001": [1.0], "K00002": [4.5]}, aggregation=strategy)

        image = pixels(render_overlay(spec))

        assert (image[50, 50] == YLORRD[expected_bin]).all()

    def test_legend_swatches_match_scale_colors(self):
        image = pixels(render_overlay(overlay(single_box_pathway(), {"K00001": [10.0]})))

        for (x0, y0, x1, y1), color in zip(legend_swatch_boxes(100, 100, 5), YLORRD, strict=True):
            assert (image[y0 : y1 + 1, x0 : x1 + 1] == color).all()

    def test_output_is_deterministic_rgb_png(self):
        spec = overlay(single_box_pathway(), {"K00001": [2.5]}, candidates={"K00001": [True]})

        first, second = render_overlay(spec), render_overlay(spec)

        assert first == second
        assert Image.open(io.BytesIO(first)).mode == "RGB"

    def test_narrow_box_reports_warning(self, caplog):
        entry = PathwayEntry(
            entry_id=9,
            ko_ids=frozenset({"K00001"}),
            kind=EntryKind.ORTHOLOG,
            graphics=(GraphicsBox(50, 50, 2, 10, ShapeKind.RECTANGLE),),
        )
        pathway = Pathway(id=PathwayId("ko", "00001"), title="narrow", entries=(entry,))
        labels = ("c1", "c2", "c3", "c4", "c5")
        spec = overlay(pathway, {"K00001": [0.5, 1.5, 2.5, 3.5, 10.0]}, labels=labels)

        warnings: list[str] = []
        with caplog.at_level(logging.WARNING):
            image = pixels(render_overlay(spec, warnings=warnings))

        assert "StripeTooNarrow" in caplog.text
        assert len(warnings) == 1
        assert warnings[0].startswith("StripeTooNarrow: ko00001 entry 9 ")
        assert "2 conditions not drawn" in warnings[0]
        assert [tuple(image[50, x]) for x in (49, 50, 51)] == list(YLORRD[:3])

    def test_base_image_too_small(self):
        spec = OverlaySpec(
            pathway=single_box_pathway(),
            base_image=blank_png(40, 40),
            condition_labels=("c1",),
            values={"K00001": [1.0]},
            scale=SCALE,
        )

        with pytest.raises(DimensionMismatch):
            render_overlay(spec)

    def test_undecodable_base_image(self):
        spec = OverlaySpec(
            pathway=single_box_pathway(),
            base_image=b"not a png",
            condition_labels=("c1",),
            values={},
            scale=SCALE,
        )

        with pytest.raises(ImageDecodeError):
            render_overlay(spec)

    def test_values_for_foreign_kos_are_rejected(self):
        with pytest.raises(ValueError):
            overlay(single_box_pathway(), {"K99999": [1.0]})


class TestRankInvariance:
    @pytest.mark.parametrize(
        "transform",
        [lambda v: v**3 + 1, lambda v: math.log(v + 2)],
        ids=["cube", "log"],
    )
    def test_monotone_transform_keeps_diagram(self, make_pathway, transform):
        kos = [f"K{i:05d}" for i in range(1, 22)]
        pathway = make_pathway("00001", [{ko} for ko in kos])
        rng = np.random.default_rng(11)
        raw = {ko: float(v) for ko, v in zip(kos, rng.permutation(21) * 0.37 + 0.1, strict=True)}

        def render(values: dict[str, float]) -> np.ndarray:
            scale = build_quantile_scale(values.values())
            spec = OverlaySpec(
                pathway=pathway,
                base_image=blank_png(1300, 60),
                condition_labels=("c1",),
                values={ko: [v] for ko, v in values.items()},
                scale=scale,
            )
            return pixels(render_overlay(spec))[:60]

        transformed = {ko: transform(v) for ko, v in raw.items()}

        assert np.array_equal(render(raw), render(transformed))


class TestQuantileScale:
    def test_uniform_values(self):
        values = list(range(1, 101))

        scale = build_quantile_scale(values, n_bins=5)

        ordered = sorted(values)
        expected = []
        for j in range(1, 5):
            h = (len(ordered) - 1) * j / 5
            lo = math.floor(h)
            expected.append(ordered[lo] + (h - lo) * (ordered[lo + 1] - ordered[lo]))
        assert scale.breakpoints == pytest.approx(expected)
        assert scale.breakpoints == pytest.approx((20.8, 40.6, 60.4, 80.2))

    def test_two_bins_median(self):
        assert build_quantile_scale([1.0, 2.0], n_bins=2).breakpoints == (1.5,)

    def test_constant_values_fall_in_first_bin(self):
        scale = build_quantile_scale([0.0] * 10)

        assert scale.breakpoints == (0.0, 0.0, 0.0, 0.0)
        assert bin_of(0.0, scale) == 0

    def test_non_finite_values_are_ignored(self):
        scale = build_quantile_scale([1.0, float("nan"), 2.0], n_bins=2)

        assert scale.breakpoints == (1.5,)

    @pytest.mark.parametrize("values", [[], [float("nan")]])
    def test_no_values(self, values):
        with pytest.raises(EmptyValues):
            build_quantile_scale(values)

    def test_colors_come_from_palette(self):
        scale = build_quantile_scale(range(10), palette="ylorrd")

        assert scale.colors == YLORRD

    @pytest.mark.parametrize("value, expected", [(0.5, 0), (2.0, 1), (2.5, 2), (4.0, 3), (9.0, 4)])
    def test_bin_of(self, value, expected):
        assert bin_of(value, SCALE) == expected


class TestPalettes:
    def test_three_bins_hit_ends_and_middle(self):
        assert palette_colors("ylorrd", 3) == (YLORRD[0], YLORRD[2], YLORRD[4])

    def test_every_palette_has_requested_length(self):
        for name in ("ylorrd", "viridis", "blues"):
            assert len(palette_colors(name, 7)) == 7

    def test_unknown_palette(self):
        with pytest.raises(ValueError):
            palette_colors("rainbow", 5)


class TestGeometry:
    def test_pixel_box_from_graphics(self):
        box = PixelBox.from_graphics(GraphicsBox(120, 60, 46, 17, ShapeKind.RECTANGLE), 600, 480)

        assert (box.x0, box.y0, box.x1, box.y1) == (97, 51, 143, 68)

    def test_pixel_box_is_clipped_to_image(self):
        box = PixelBox.from_graphics(GraphicsBox(5, 5, 20, 20, ShapeKind.RECTANGLE), 12, 12)

        assert (box.x0, box.y0, box.x1, box.y1) == (0, 0, 11, 11)

    def test_stripes_cover_box(self):
        assert stripe_extents(PixelBox(0, 0, 9, 0), 3) == [(0, 2), (3, 5), (6, 9)]

    def test_narrow_box_gets_one_pixel_stripes(self):
        assert stripe_extents(PixelBox(4, 0, 6, 0), 5) == [(4, 4), (5, 5), (6, 6)]

    def test_legend_swatches(self):
        boxes = legend_swatch_boxes(600, 480, 5)

        assert boxes[0] == (8, 484, 47, 497)
        assert boxes[-1] == (168, 484, 207, 497)


class TestDisplayValues:
    @pytest.fixture
    def matrix(self):
        return ExpressionMatrix(
            gene_ids=("g1", "g2", "g3"),
            condition_labels=("c1", "c2"),
            values=np.array([[2.0, 10.0], [4.0, 0.0], [7.0, 7.0]]),
        )

    @pytest.fixture
    def mapping(self):
        return KoMapping(
            entries={
                "g1": frozenset({"K00001"}),
                "g2": frozenset({"K00001"}),
                "g3": frozenset({"K00002"}),
                "absent": frozenset({"K00003"}),
            }
        )

    def test_aggregation_strategies(self):
        assert aggregate_ko_value([5.0]) == 5.0
        assert aggregate_ko_value([2.0, 4.0]) == 3.0
        assert aggregate_ko_value([2.0, 4.0], AggregationStrategy.MAX) == 4.0
        assert aggregate_ko_value([2.0, 4.0], AggregationStrategy.SUM) == 6.0

    def test_aggregation_needs_values(self):
        with pytest.raises(ValueError):
            aggregate_ko_value([])

    def test_display_values_per_condition(self, make_pathway, matrix, mapping):
        pathway = make_pathway("00001", [{"K00001"}, {"K00002", "K00003"}, {"K00004"}])

        display = ko_display_values(pathway, matrix, mapping)

        assert display == {"K00001": [3.0, 5.0], "K00002": [7.0, 7.0]}
        assert missing_kos(pathway, display) == ["K00003", "K00004"]

    def test_candidate_flags(self, make_pathway, mapping):
        pathway = make_pathway("00001", [{"K00001"}, {"K00002"}])
        candidates = [
            CandidateSet("c2", frozenset({"g1"})),
            CandidateSet("T1-vs-T0", frozenset({"g3", "absent"})),
        ]

        flags = candidate_flags(pathway, candidates, mapping, ("c1", "c2"))

        assert flags == {"K00001": [False, True], "K00002": [True, True]}
