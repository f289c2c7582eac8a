import zipfile

import pytest

from core.models.enrichment import ContingencyTable, EnrichmentResult
from core.models.reports import RunReport
from services.report_service import (
    BUNDLE_NAME,
    OutputStage,
    format_float,
    safe_filename,
    write_enrichment_tsv,
    write_labeled_enrichment_tsv,
    write_missing_tsv,
    write_profile_summary,
    write_profiles_tsv,
    write_report_bundle,
    write_run_report,
)
from utils.exceptions import IoError

HEADER = "term_id\tterm_name\ta\tb\tc\td\tp_value\tp_adjusted\thit_genes"


@pytest.fixture
def result():
    return EnrichmentResult(
        term_id="ko00010",
        term_name="Glycolysis / Gluconeogenesis",
        table=ContingencyTable(a=2, b=0, c=0, d=1),
        p_value=1 / 3,
        p_adjusted=1 / 3,
        hit_genes=("g1", "g2"),
    )


@pytest.mark.parametrize(
    "value, expected",
    [
        (1.0, "1.000000"),
        (0.0, "0.000000"),
        (1 / 3, "0.333333"),
        (1e-4, "0.000100"),
        (3.2e-7, "3.200000e-7"),
        (1.5e-12, "1.500000e-12"),
    ],
)
def test_format_float(value, expected):
    assert format_float(value) == expected


@pytest.mark.parametrize(
    "label, expected",
    [("cond1", "cond1"), ("T1 vs T0", "T1_vs_T0"), ("a/b:c", "a_b_c"), ("..", "unnamed")],
)
def test_safe_filename(label, expected):
    assert safe_filename(label) == expected


class TestEnrichmentTsv:
    def test_rows(self, tmp_path, result):
        dest = tmp_path / "pathway_enrichment.tsv"

        write_enrichment_tsv([result], dest)

        assert dest.read_bytes() == (
            f"{HEADER}\n"
            "ko00010\tGlycolysis / Gluconeogenesis\t2\t0\t0\t1\t0.333333\t0.333333\tg1,g2\n"
        ).encode()

    def test_no_results_is_header_only(self, tmp_path):
        dest = tmp_path / "empty.tsv"

        write_enrichment_tsv([], dest)

        assert dest.read_text() == HEADER + "\n"

    def test_label_column(self, tmp_path, result):
        dest = tmp_path / "labeled.tsv"

        write_labeled_enrichment_tsv({"cond1": [result], "cond2": []}, dest)

        lines = dest.read_text().splitlines()
        assert lines[0] == "label\t" + HEADER
        assert lines[1].startswith("cond1\tko00010\t")
        assert len(lines) == 2

    def test_creates_parent_directories(self, tmp_path, result):
        dest = tmp_path / "go_enrichment" / "cond1_BP.tsv"

        write_enrichment_tsv([result], dest, label="cond1")

        assert dest.read_text().startswith("label\t")


def test_profile_tables(tmp_path):
    groups = {"Up-EE": ("gA", "gC"), "Down-EE": ("gB",)}

    write_profiles_tsv(groups, tmp_path / "profiles.tsv")
    write_profile_summary(groups, tmp_path / "profile_summary.tsv")

    assert (tmp_path / "profiles.tsv").read_text() == (
        "profile_key\tgene_id\nUp-EE\tgA\nUp-EE\tgC\nDown-EE\tgB\n"
    )
    assert (tmp_path / "profile_summary.tsv").read_text() == (
        "profile_key\tn_genes\nUp-EE\t2\nDown-EE\t1\n"
    )


def test_missing_tsv_is_sorted(tmp_path):
    dest = tmp_path / "missing.tsv"

    write_missing_tsv([("ko00020", "K00001"), ("ko00010", "K00009"), ("ko00010", "K00002")], dest)

    assert dest.read_text().splitlines() == [
        "pathway_id\tko_id",
        "ko00010\tK00002",
        "ko00010\tK00009",
        "ko00020\tK00001",
    ]


def test_run_report_layout(tmp_path):
    report = RunReport(pathways_rendered=3)
    report.record_family("pathway", tested=4, significant=1)
    report.record_family("go.BP", tested=2, significant=0)
    report.warn("candidate label 'x' matches no condition")
    dest = tmp_path / "run_report.tsv"

    write_run_report(report, dest)

    assert dest.read_text().splitlines() == [
        "key\tvalue",
        "pathways_rendered\t3",
        "tests.go.BP\t2",
        "significant.go.BP\t0",
        "tests.pathway\t4",
        "significant.pathway\t1",
        "warnings\t1",
        "warning\tcandidate label 'x' matches no condition",
    ]


def test_unwritable_destination(tmp_path, result):
    blocker = tmp_path / "blocker"
    blocker.write_text("a file, not a directory")

    with pytest.raises(IoError) as excinfo:
        write_enrichment_tsv([result], blocker / "out.tsv")

    assert "blocker" in excinfo.value.path


class TestOutputStage:
    def test_promote_replaces_previous_outputs(self, tmp_path):
        out = tmp_path / "out"
        (out / "pathways").mkdir(parents=True)
        (out / "pathways" / "stale.png").write_bytes(b"old")
        (out / "run_report.tsv").write_text("old\n")

        stage = OutputStage(out).prepare()
        stage.path("pathways").mkdir()
        stage.path("pathways", "ko00010.png").write_bytes(b"new")
        stage.path("run_report.tsv").write_text("new\n")
        stage.promote()

        assert not stage.root.exists()
        assert (out / "run_report.tsv").read_text() == "new\n"
        assert sorted(p.name for p in (out / "pathways").iterdir()) == ["ko00010.png"]

    def test_promote_removes_outputs_the_run_did_not_produce(self, tmp_path):
        out = tmp_path / "out"
        (out / "go_enrichment").mkdir(parents=True)
        (out / "go_enrichment" / "cond1_BP.tsv").write_text("old\n")
        (out / "profiles.tsv").write_text("old\n")

        stage = OutputStage(out).prepare()
        stage.path("run_report.tsv").write_text("new\n")
        promoted = stage.promote()

        assert promoted == [out / "run_report.tsv"]
        assert sorted(p.name for p in out.iterdir()) == ["run_report.tsv"]

    def test_unpromoted_stage_leaves_final_paths_alone(self, tmp_path):
        out = tmp_path / "out"
        out.mkdir()
        (out / "run_report.tsv").write_text("previous\n")

        stage = OutputStage(out).prepare()
        stage.path("run_report.tsv").write_text("half-written\n")

        assert (out / "run_report.tsv").read_text() == "previous\n"
        assert (out / ".partial" / "run_report.tsv").is_file()

    def test_prepare_clears_leftover_partial(self, tmp_path):
        leftover = tmp_path / ".partial" / "old.tsv"
        leftover.parent.mkdir()
        leftover.write_text("x")

        stage = OutputStage(tmp_path).prepare()

        assert list(stage.root.iterdir()) == []


class TestReportBundle:
    def test_bundle_is_deterministic(self, tmp_path):
        source = tmp_path / "out"
        (source / "pathways").mkdir(parents=True)
        (source / "pathways" / "ko00010.png").write_bytes(b"\x89PNG fake")
        (source / "run_report.tsv").write_text("key\tvalue\n")

        first = write_report_bundle(source, tmp_path / "first.zip")
        second = write_report_bundle(source, tmp_path / "second.zip")

        assert first == second == 2
        assert (tmp_path / "first.zip").read_bytes() == (tmp_path / "second.zip").read_bytes()
        with zipfile.ZipFile(tmp_path / "first.zip") as archive:
            assert archive.namelist() == ["pathways/ko00010.png", "run_report.tsv"]
            assert archive.read("run_report.tsv") == b"key\tvalue\n"

    def test_bundle_inside_source_excludes_itself(self, tmp_path):
        (tmp_path / "a.tsv").write_text("a\n")
        dest = tmp_path / BUNDLE_NAME

        assert write_report_bundle(tmp_path, dest) == 1
        assert write_report_bundle(tmp_path, dest) == 1
