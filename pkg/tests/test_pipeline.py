import asyncio
import io
import time

import numpy as np
import pytest
from conftest import FIXTURES
from PIL import Image

from clients.kegg_api.exceptions import FixtureMissing
from pipeline import __version__
from pipeline.config import RunConfig
from pipeline.flows import main_pipeline_flow
from pipeline.main import main

ENRICHMENT_HEADER = "label\tterm_id\tterm_name\ta\tb\tc\td\tp_value\tp_adjusted\thit_genes"
GLYCOLYSIS = "ko00010\tGlycolysis / Gluconeogenesis"
GOLDEN = FIXTURES / "golden" / "toy"

# Quantile bins of the toy matrix: breakpoints 1, 5, 10, 20
BIN_0 = (255, 255, 178)
BIN_1 = (254, 204, 92)
BIN_2 = (253, 141, 60)
BIN_3 = (240, 59, 32)
RED = (255, 0, 0)


@pytest.fixture(autouse=True)
def no_config_file(monkeypatch):
    monkeypatch.delenv("PATHMAP_CONFIG_FILE", raising=False)


@pytest.fixture
def run_config(toy_inputs, warm_cache, tmp_path):
    def _make(**overrides) -> RunConfig:
        values = {
            "expr": toy_inputs["expr"],
            "ko_map": toy_inputs["ko_map"],
            "candidates": toy_inputs["candidates"],
            "go": toy_inputs["go"],
            "out": tmp_path / "out",
            "cache": warm_cache,
            "offline": True,
            **overrides,
        }
        return RunConfig.from_flat({k: v for k, v in values.items() if v is not None})

    return _make


def run(config: RunConfig, kegg_service=None):
    return asyncio.run(main_pipeline_flow(config, kegg_service=kegg_service))


def output_tree(root) -> dict[str, bytes]:
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


def pixels(path) -> np.ndarray:
    return np.asarray(Image.open(io.BytesIO(path.read_bytes())).convert("RGB"))


class TestToyRun:
    @pytest.fixture
    def out(self, run_config):
        config = run_config()
        run(config)
        return config.out_dir

    def test_output_files(self, out):
        names = set(output_tree(out))

        assert {
            "pathway_enrichment.tsv",
            "pathway_expression_enrichment.tsv",
            "missing.tsv",
            "run_report.tsv",
            "pathways/ko00010.png",
        } <= names
        for label in ("cond1", "cond2"):
            for namespace in ("BP", "MF", "CC"):
                assert f"go_enrichment/{label}_{namespace}.tsv" in names
                assert f"go_enrichment/{label}_{namespace}.significant.tsv" in names
        assert not (out / ".partial").exists()

    def test_text_outputs_match_golden_tree(self, out):
        produced = {name: data for name, data in output_tree(out).items() if name.endswith(".tsv")}

        assert produced == output_tree(GOLDEN)

    def test_overlay_pixels(self, out):
        image = pixels(out / "pathways" / "ko00010.png")

        assert image.shape == (528, 600, 3)
        # entry 13 (K00844 <- g1): 10 and 20
        assert tuple(image[60, 105]) == BIN_2
        assert tuple(image[60, 130]) == BIN_3
        # entry 18 (K00134 <- g2): 5 and 1
        assert tuple(image[407, 470]) == BIN_1
        assert tuple(image[407, 500]) == BIN_0
        # candidate outlines around entries 13 and 18
        assert (image[49:71, 95] == RED).all()
        assert (image[49, 95:146] == RED).all()
        assert tuple(image[407, 458]) == RED
        # entry 15 has no measured gene
        assert tuple(image[180, 120]) == (255, 255, 255)

    def test_diagram_matches_expected_paint(self, out):
        image = pixels(out / "pathways" / "ko00010.png")

        expected = np.full((480, 600, 3), 255, dtype=np.uint8)
        # entry 13: box x 97-143, y 51-68; entry 18: box x 460-506, y 398-415
        expected[51:69, 97:120] = BIN_2
        expected[51:69, 120:144] = BIN_3
        expected[398:416, 460:483] = BIN_1
        expected[398:416, 483:507] = BIN_0
        for x0, y0, x1, y1 in ((97, 51, 143, 68), (460, 398, 506, 415)):
            expected[y0 - 2 : y1 + 3, x0 - 2 : x0] = RED
            expected[y0 - 2 : y1 + 3, x1 + 1 : x1 + 3] = RED
            expected[y0 - 2 : y0, x0 - 2 : x1 + 3] = RED
            expected[y1 + 1 : y1 + 3, x0 - 2 : x1 + 3] = RED

        assert np.array_equal(image[:480], expected)


def test_runs_are_byte_identical(run_config, tmp_path):
    first = run_config(out=tmp_path / "first", report_bundle=True)
    second = run_config(out=tmp_path / "second", report_bundle=True)

    for config in (first, second):
        started = time.monotonic()
        run(config)
        assert time.monotonic() - started < 5.0

    assert output_tree(first.out_dir) == output_tree(second.out_dir)
    assert "report_bundle.zip" in output_tree(first.out_dir)


def test_warm_cache_makes_no_requests(run_config, online_service, request_counter, warm_cache):
    config = run_config(offline=None)

    with online_service(warm_cache) as kegg:
        report = run(config, kegg_service=kegg)

    assert request_counter.count == 0
    assert report.pathways_rendered == 1


def test_without_candidates_every_p_value_is_one(run_config):
    config = run_config(candidates=None, go=None)

    report = run(config)

    assert (config.out_dir / "pathway_enrichment.tsv").read_text().splitlines() == [
        ENRICHMENT_HEADER,
        f"none\t{GLYCOLYSIS}\t0\t0\t2\t1\t1.000000\t1.000000\t",
    ]
    assert not (config.out_dir / "go_enrichment").exists()
    assert report.significant == {"pathway": 0, "pathway_expression": 0}


def test_unmatched_candidate_label_warns(run_config, toy_inputs):
    toy_inputs["candidates"].write_text("shared\tg1\n")
    config = run_config()

    report = run(config)

    assert len(report.warnings) == 1
    assert "matches no condition" in report.warnings[0]
    image = pixels(config.out_dir / "pathways" / "ko00010.png")
    assert tuple(image[49, 95]) == RED
    assert tuple(image[400, 458]) != RED


def test_pathway_filter_skips_the_listing(run_config, online_service, request_counter, tmp_path):
    config = run_config(offline=None, pathway=["ko00010"])

    with online_service(tmp_path / "cold") as kegg:
        report = run(config, kegg_service=kegg)

    assert report.pathways_rendered == 1
    assert request_counter.requests == ["/get/ko00010/kgml", "/get/ko00010/image"]


def test_pathway_filter_on_warm_cache_makes_no_requests(
    run_config, online_service, request_counter, warm_cache
):
    (warm_cache / "ko" / "pathways.list").unlink()
    config = run_config(offline=None, pathway=["ko00010"])

    with online_service(warm_cache) as kegg:
        started = time.monotonic()
        report = run(config, kegg_service=kegg)
        elapsed = time.monotonic() - started

    assert request_counter.count == 0
    assert report.pathways_rendered == 1
    assert elapsed < 10.0


def test_unmatched_candidate_label_warns_in_timeseries_mode(run_config, toy_inputs):
    toy_inputs["candidates"].write_text("shared\tg1\n")
    config = run_config(mode="timeseries", timepoints="cond1,cond2", go=None)

    report = run(config)

    assert any("'shared' matches no condition" in w for w in report.warnings)
    assert "matches no condition" in (config.out_dir / "run_report.tsv").read_text()


def test_narrow_box_warning_reaches_run_report(run_config, toy_inputs, warm_cache):
    kgml = warm_cache / "ko" / "ko00010.kgml"
    kgml.write_text(
        kgml.read_text().replace('x="120" y="60" width="46"', 'x="120" y="60" width="1"')
    )
    toy_inputs["expr"].write_text(
        "gene_id\tcond1\tcond2\tcond3\ng1\t10\t20\t30\ng2\t5\t1\t2\ng3\t0\t40\t3\n"
    )
    config = run_config(go=None)

    report = run(config)

    narrow = [w for w in report.warnings if w.startswith("StripeTooNarrow")]
    assert len(narrow) == 1
    assert "ko00010 entry 13" in narrow[0]
    lines = (config.out_dir / "run_report.tsv").read_text().splitlines()
    assert f"warning\t{narrow[0]}" in lines


def test_rerun_drops_outputs_of_the_previous_run(run_config):
    run(run_config())
    config = run_config(go=None)

    report = run(config)

    assert not (config.out_dir / "go_enrichment").exists()
    assert set(report.tests_performed) == {"pathway", "pathway_expression"}
    assert sorted(p.name for p in config.out_dir.iterdir()) == [
        "missing.tsv",
        "pathway_enrichment.tsv",
        "pathway_expression_enrichment.tsv",
        "pathways",
        "run_report.tsv",
    ]


def test_failed_run_keeps_previous_outputs(run_config):
    config = run_config()
    run(config)
    previous = (config.out_dir / "run_report.tsv").read_bytes()

    with pytest.raises(FixtureMissing):
        run(run_config(pathway=["ko00020"]))

    assert (config.out_dir / "run_report.tsv").read_bytes() == previous
    assert (config.out_dir / ".partial").is_dir()


def test_timeseries_run(run_config, tmp_path):
    expr = tmp_path / "timeseries.tsv"
    expr.write_text(
        "gene_id\tt1\tt2\tt3\n"
        "gA\t1\t10\t10\n"
        "gB\t10\t1\t1\n"
        "gC\t5\t5\t5\n"
        "gD\t1\t10\t1\n"
        "gE\t0\t0\t30\n"
    )
    ko_map = tmp_path / "timeseries_ko.tsv"
    ko_map.write_text("gA\tK00844\ngB\tK00134\ngC\tK01803\ngD\tK00850\ngE\tK99999\n")
    config = run_config(
        expr=expr,
        ko_map=ko_map,
        candidates=None,
        go=None,
        mode="timeseries",
        timepoints="t1,t2,t3",
    )

    report = run(config)

    out = config.out_dir
    assert (out / "profiles.tsv").read_text().splitlines() == [
        "profile_key\tgene_id",
        "Down-EE\tgB",
        "EE-Up\tgE",
        "Up-Down\tgD",
        "Up-EE\tgA",
    ]
    assert (out / "profile_summary.tsv").read_text().splitlines()[1:] == [
        "Down-EE\t1",
        "EE-Up\t1",
        "Up-Down\t1",
        "Up-EE\t1",
    ]
    figures = sorted(
        p.relative_to(out).as_posix() for p in (out / "pathways" / "profiles").rglob("*.png")
    )
    assert figures == [
        "pathways/profiles/Down-EE/ko00010.png",
        "pathways/profiles/Up-Down/ko00010.png",
        "pathways/profiles/Up-EE/ko00010.png",
    ]
    assert report.profile_figures_rendered == 3
    assert not (out / "pathway_expression_enrichment.tsv").exists()

    # gA maps to entry 13; entry 15 belongs to the Up-Down group
    up_ee = pixels(out / "pathways" / "profiles" / "Up-EE" / "ko00010.png")
    assert tuple(up_ee[49, 95]) == RED
    assert tuple(up_ee[169, 95]) != RED


class TestCli:
    def test_version(self, capsys):
        assert main(["version"]) == 0
        assert capsys.readouterr().out.strip() == f"pathmap {__version__}"

    def test_run(self, toy_inputs, warm_cache, tmp_path):
        out = tmp_path / "cli_out"

        code = main(
            [
                "run",
                "--expr", str(toy_inputs["expr"]),
                "--ko-map", str(toy_inputs["ko_map"]),
                "--candidates", str(toy_inputs["candidates"]),
                "--out", str(out),
                "--cache", str(warm_cache),
                "--offline",
            ]
        )

        assert code == 0
        assert (out / "pathways" / "ko00010.png").is_file()

    def test_missing_input_exits_nonzero(self, toy_inputs, warm_cache, tmp_path):
        code = main(
            [
                "run",
                "--expr", str(tmp_path / "absent.tsv"),
                "--ko-map", str(toy_inputs["ko_map"]),
                "--out", str(tmp_path / "cli_out"),
                "--cache", str(warm_cache),
                "--offline",
            ]
        )

        assert code == 1

    def test_invalid_configuration_exits_nonzero(self, toy_inputs, tmp_path):
        code = main(
            [
                "run",
                "--expr", str(toy_inputs["expr"]),
                "--ko-map", str(toy_inputs["ko_map"]),
                "--out", str(tmp_path / "cli_out"),
                "--mode", "timeseries",
            ]
        )

        assert code == 1

    def test_non_numeric_workers_in_config_file_exits_nonzero(self, toy_inputs, tmp_path):
        config_file = tmp_path / "pathmap.yaml"
        config_file.write_text("workers: several\n")

        code = main(
            [
                "run",
                "--config", str(config_file),
                "--expr", str(toy_inputs["expr"]),
                "--ko-map", str(toy_inputs["ko_map"]),
                "--out", str(tmp_path / "cli_out"),
            ]
        )

        assert code == 1
