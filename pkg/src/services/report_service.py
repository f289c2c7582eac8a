"""
TSV report writers and the staged output directory.

All text output is UTF-8 with LF line endings. Floats are written with six
digits after the point, in scientific notation below 1e-4.
"""

import logging
import re
import shutil
import zipfile
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from core.models.enrichment import EnrichmentResult
from core.models.reports import RunReport
from utils.exceptions import IoError

logger = logging.getLogger(__name__)

ENRICHMENT_COLUMNS = (
    "term_id",
    "term_name",
    "a",
    "b",
    "c",
    "d",
    "p_value",
    "p_adjusted",
    "hit_genes",
)

PARTIAL_DIR = ".partial"
PREVIOUS_DIR = ".previous"
BUNDLE_NAME = "report_bundle.zip"
ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)

_UNSAFE_CHARS = re.compile(r"[^A-Za-z0-9._-]+")


def format_float(value: float) -> str:
    """``1.000000``; values below 1e-4 as ``3.200000e-7``."""
    if value == 0 or abs(value) >= 1e-4:
        return f"{value:.6f}"
    mantissa, exponent = f"{value:.6e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def safe_filename(label: str) -> str:
    """Filesystem-safe rendering of a candidate label or profile key."""
    cleaned = _UNSAFE_CHARS.sub("_", label).strip("._")
    return cleaned or "unnamed"


def write_enrichment_tsv(
    results: Sequence[EnrichmentResult],
    destination: Path,
    label: str | None = None,
) -> None:
    """
    Header plus one row per result; a non-None ``label`` adds a leading column.

    Raises:
        IoError: If the file cannot be written
    """
    if label is None:
        write_lines(
            destination,
            ["\t".join(ENRICHMENT_COLUMNS), *(_enrichment_row(r) for r in results)],
        )
    else:
        write_labeled_enrichment_tsv({label: results}, destination)


def write_labeled_enrichment_tsv(
    groups: Mapping[str, Sequence[EnrichmentResult]], destination: Path
) -> None:
    """Several result lists in one file, each row prefixed by its group label."""
    lines = ["\t".join(("label", *ENRICHMENT_COLUMNS))]
    for label, results in groups.items():
        lines.extend(f"{label}\t{_enrichment_row(r)}" for r in results)
    write_lines(destination, lines)


def _enrichment_row(result: EnrichmentResult) -> str:
    table = result.table
    return "\t".join(
        (
            result.term_id,
            result.term_name,
            str(table.a),
            str(table.b),
            str(table.c),
            str(table.d),
            format_float(result.p_value),
            format_float(result.p_adjusted),
            ",".join(result.hit_genes),
        )
    )


def write_profiles_tsv(groups: Mapping[str, Sequence[str]], destination: Path) -> None:
    lines = ["profile_key\tgene_id"]
    for key, genes in groups.items():
        lines.extend(f"{key}\t{gene}" for gene in genes)
    write_lines(destination, lines)


def write_profile_summary(groups: Mapping[str, Sequence[str]], destination: Path) -> None:
    lines = ["profile_key\tn_genes"]
    lines.extend(f"{key}\t{len(genes)}" for key, genes in groups.items())
    write_lines(destination, lines)


def write_missing_tsv(missing: Iterable[tuple[str, str]], destination: Path) -> None:
    """``pathway_id<TAB>ko_id`` for every pathway KO without measured genes."""
    lines = ["pathway_id\tko_id"]
    lines.extend(f"{pathway_id}\t{ko}" for pathway_id, ko in sorted(missing))
    write_lines(destination, lines)


def write_run_report(report: RunReport, destination: Path) -> None:
    """Counts as ``key<TAB>value`` rows followed by one row per warning."""
    lines = ["key\tvalue", f"pathways_rendered\t{report.pathways_rendered}"]
    if report.profile_figures_rendered:
        lines.append(f"profile_figures_rendered\t{report.profile_figures_rendered}")
    for family in sorted(report.tests_performed):
        lines.append(f"tests.{family}\t{report.tests_performed[family]}")
        lines.append(f"significant.{family}\t{report.significant.get(family, 0)}")
    lines.append(f"warnings\t{len(report.warnings)}")
    lines.extend(f"warning\t{message}" for message in report.warnings)
    write_lines(destination, lines)


def write_lines(destination: Path, lines: Iterable[str]) -> None:
    write_bytes(destination, ("\n".join(lines) + "\n").encode("utf-8"))


def write_bytes(destination: Path, data: bytes) -> None:
    try:
        destination.parent.mkdir(parents=True, exist_ok=True)
        destination.write_bytes(data)
    except OSError as e:
        raise IoError(str(destination), str(e)) from e


class OutputStage:
    """
    Stages a run's outputs under ``<out_dir>/.partial``.

    ``promote`` makes the staged tree the whole content of ``out_dir``:
    outputs of an earlier run that this run did not produce are removed. A
    failed run leaves its outputs in ``.partial`` and never touches the
    final paths.
    """

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        self.root = self.out_dir / PARTIAL_DIR

    def prepare(self) -> "OutputStage":
        try:
            if self.root.exists():
                shutil.rmtree(self.root)
            self.root.mkdir(parents=True)
        except OSError as e:
            raise IoError(str(self.root), str(e)) from e
        return self

    def path(self, *parts: str) -> Path:
        return self.root.joinpath(*parts)

    def promote(self) -> list[Path]:
        """Replace the contents of ``out_dir`` with the staged tree; returns promoted paths."""
        previous = self.out_dir / PREVIOUS_DIR
        promoted = []
        try:
            if previous.exists():
                shutil.rmtree(previous)
            previous.mkdir()
            for old in sorted(self.out_dir.iterdir()):
                if old.name not in (PARTIAL_DIR, PREVIOUS_DIR):
                    old.replace(previous / old.name)
            for staged in sorted(self.root.iterdir()):
                final = self.out_dir / staged.name
                staged.replace(final)
                promoted.append(final)
            self.root.rmdir()
            shutil.rmtree(previous)
        except OSError as e:
            raise IoError(str(self.out_dir), str(e)) from e
        logger.info(f"Promoted {len(promoted)} outputs into {self.out_dir}")
        return promoted


def write_report_bundle(source_dir: Path, destination: Path) -> int:
    """
    Zip every file under ``source_dir`` with fixed timestamps and sorted members.

    Returns:
        Number of archived files
    """
    files = sorted(
        p for p in source_dir.rglob("*") if p.is_file() and p.resolve() != destination.resolve()
    )
    try:
        with zipfile.ZipFile(destination, "w", compression=zipfile.ZIP_DEFLATED) as archive:
            for path in files:
                info = zipfile.ZipInfo(path.relative_to(source_dir).as_posix(), ZIP_EPOCH)
                info.compress_type = zipfile.ZIP_DEFLATED
                info.external_attr = 0o644 << 16
                archive.writestr(info, path.read_bytes())
    except OSError as e:
        raise IoError(str(destination), str(e)) from e
    logger.info(f"Bundled {len(files)} files into {destination.name}")
    return len(files)
