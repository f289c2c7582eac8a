"""
Command-line entry point for pathmap.

``pathmap run`` executes the full analysis, ``pathmap fetch`` pre-warms the
KEGG cache and ``pathmap version`` prints the package version.
"""

import argparse
import asyncio
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from dotenv import load_dotenv

from clients.kegg_api.config import KeggAPIConfig
from clients.kegg_api.exceptions import KeggAPIError
from core.config.services import PALETTE_NAMES
from core.config.system import CacheConfig
from core.models.pathways import PathwayId
from core.models.rendering import AggregationStrategy
from pipeline import __version__
from pipeline.config import RunConfig, RunMode
from pipeline.config.pipeline import LOG_LEVELS
from pipeline.flows import fetch_flow, main_pipeline_flow
from services.kegg_service import KeggService
from utils.exceptions import ConfigurationError, PathmapError

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathmap",
        description="Overlay expression data and enrichment results on KEGG pathway maps.",
    )
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the full analysis")
    run.add_argument("--config", type=Path, help="Flat YAML config file")
    run.add_argument("--expr", type=Path, help="Expression matrix TSV")
    run.add_argument("--ko-map", type=Path, help="gene_id -> KO mapping TSV")
    run.add_argument("--candidates", type=Path, help="label -> gene_id candidate lists TSV")
    run.add_argument("--go", type=Path, help="GO annotation TSV")
    run.add_argument("--org", help="KEGG organism code (default: ko)")
    run.add_argument("--out", type=Path, help="Output directory")
    run.add_argument("--cache", type=Path, help="KEGG cache directory")
    run.add_argument("--offline", action="store_true", default=None)
    run.add_argument("--refresh", action="store_true", default=None)
    run.add_argument("--mode", choices=[m.value for m in RunMode])
    run.add_argument("--timepoints", help="Comma-separated ordered time point columns")
    run.add_argument(
        "--replicate",
        action="append",
        metavar="COL=TP",
        help="Assign a matrix column to a time point (repeatable)",
    )
    run.add_argument("--alpha", type=float)
    run.add_argument("--expressed-threshold", type=float)
    run.add_argument("--bins", type=int)
    run.add_argument("--fc-threshold", type=float)
    run.add_argument("--pseudocount", type=float)
    run.add_argument("--replicate-test", action="store_true", default=None)
    run.add_argument("--test-alpha", type=float)
    run.add_argument("--agg", choices=[a.value for a in AggregationStrategy])
    run.add_argument("--palette", choices=PALETTE_NAMES)
    run.add_argument("--pathway", action="append", metavar="ID", help="Restrict to pathway")
    run.add_argument("--report-bundle", action="store_true", default=None)
    run.add_argument("--workers", type=int)

    fetch = commands.add_parser("fetch", help="Pre-warm the KEGG cache")
    fetch.add_argument("--org", default="ko")
    fetch.add_argument("--cache", type=Path)
    fetch.add_argument("--refresh", action="store_true")
    fetch.add_argument("--pathway", action="append", metavar="ID")

    commands.add_parser("version", help="Print the version")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, dispatch the command and map failures to exit codes."""
    load_dotenv()
    args = build_parser().parse_args(argv)
    _configure_logging(args.log_level or "INFO")

    if args.command == "version":
        print(f"pathmap {__version__}")
        return 0

    try:
        if args.command == "fetch":
            return _fetch(args)
        return _run(args)
    except (PathmapError, KeggAPIError) as e:
        logger.error(str(e))
        return 1


def _run(args: argparse.Namespace) -> int:
    overrides = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config")
    }
    config = RunConfig.load(overrides, config_file=args.config)
    _configure_logging(config.log_level)

    report = asyncio.run(main_pipeline_flow(config))
    logger.info(f"Outputs written to {config.out_dir}")
    if report.warnings:
        logger.info(f"{len(report.warnings)} warnings recorded in run_report.tsv")
    return 0


def _fetch(args: argparse.Namespace) -> int:
    try:
        cache = CacheConfig(
            **({"cache_dir": args.cache} if args.cache else {}), refresh=args.refresh
        )
        pathway_ids = [PathwayId.parse(p) for p in args.pathway or []]
    except ValueError as e:
        raise ConfigurationError(str(e), "fetch") from e

    with KeggService(cache, api_config=KeggAPIConfig()) as kegg:
        resolved = asyncio.run(fetch_flow(args.org, kegg, pathway_ids or None))
    print(f"{len(resolved)} pathways cached under {cache.org_dir(args.org)}")
    return 0


def _configure_logging(level: str) -> None:
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, force=True)


def run():
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
