import asyncio
import time
from pathlib import Path

from prefect import flow, get_run_logger

from clients.kegg_api.exceptions import KeggAPIError
from core.models.enrichment import EnrichmentResult, NamespaceEnrichment
from core.models.expression import CandidateSet, ExpressionMatrix
from core.models.pathways import Pathway, PathwayId
from core.models.profiles import TimeSeriesDesign
from core.models.rendering import OverlaySpec, QuantileScale
from core.models.reports import RunReport
from pipeline.config import RunConfig, RunMode
from pipeline.flows.fetch_flow import fetch_flow
from pipeline.flows.helpers import RunInputs, load_inputs, pathways_with_universe_genes
from pipeline.tasks import render_pathway_task
from services.enrichment_service import EnrichmentService
from services.kegg_service import KeggService
from services.profile_service import group_profiles, profile_enrichment
from services.render_service import (
    build_quantile_scale,
    candidate_flags,
    ko_display_values,
    missing_kos,
)
from services.report_service import (
    BUNDLE_NAME,
    OutputStage,
    safe_filename,
    write_enrichment_tsv,
    write_labeled_enrichment_tsv,
    write_missing_tsv,
    write_profile_summary,
    write_profiles_tsv,
    write_report_bundle,
    write_run_report,
)
from utils.exceptions import PathmapError

# Label of the empty selection tested when no candidate sets are given
NO_CANDIDATES_LABEL = "none"


@flow(
    name="pathmap_run",
    description="Ingest, resolve pathways, test, classify, render and report",
    version="1.0.0",
    retries=0,
    retry_delay_seconds=60,
    timeout_seconds=None,
    validate_parameters=False,
)
async def main_pipeline_flow(
    config: RunConfig,
    kegg_service: KeggService | None = None,
) -> RunReport:
    """
    Full run: ingest, resolve pathways, test, classify, render, report.

    Outputs are staged under ``<out_dir>/.partial`` and promoted only when
    every stage succeeded.

    Args:
        config: Validated run configuration
        kegg_service: KEGG service to use; built from the config when omitted

    Returns:
        Counts and warnings of the run
    """
    logger = get_run_logger()
    started = time.monotonic()
    logger.info(f"Starting pathmap run ({config.mode.value} mode, org '{config.org_code}')")

    report = RunReport()
    stage = OutputStage(config.out_dir).prepare()
    owns_service = kegg_service is None
    kegg = kegg_service or KeggService(config.cache, api_config=config.kegg_api)

    try:
        inputs = load_inputs(config, report)
        pathways, images = await _resolve_pathways(config, kegg, inputs)

        enrichment = EnrichmentService()
        _candidate_enrichment(config, inputs, pathways, enrichment, stage, report)
        if config.mode is RunMode.MULTI:
            _expression_enrichment(config, inputs, pathways, enrichment, stage, report)

        groups: dict[str, tuple[str, ...]] = {}
        design = config.design
        if design is not None:
            groups = _profiles(config, design, inputs, enrichment, stage, report)

        await _render(config, inputs, pathways, images, groups, stage, report)

        write_run_report(report, stage.path("run_report.tsv"))
        if config.report_bundle:
            write_report_bundle(stage.root, stage.path(BUNDLE_NAME))
        stage.promote()

    except (PathmapError, KeggAPIError) as e:
        logger.error(f"Run failed: {e}")
        logger.error(f"Partial outputs left in {stage.root}")
        raise
    finally:
        if owns_service:
            kegg.close()

    report.duration_seconds = time.monotonic() - started
    logger.info(
        f"Run completed in {report.duration_seconds:.2f}s: "
        f"{report.pathways_rendered} pathways rendered, {report.total_tests} tests, "
        f"{len(report.warnings)} warnings"
    )
    return report


async def _resolve_pathways(
    config: RunConfig, kegg: KeggService, inputs: RunInputs
) -> tuple[list[Pathway], dict[PathwayId, bytes]]:
    logger = get_run_logger()
    fetched = await fetch_flow(config.org_code, kegg, list(config.pathways) or None)
    images = {pathway.id: image for pathway, image in fetched}
    pathways = pathways_with_universe_genes(
        [pathway for pathway, _ in fetched], inputs.mapping, inputs.matrix.universe
    )
    logger.info(f"{len(pathways)} of {len(fetched)} pathways contain measured genes")
    return pathways, images


def _candidate_enrichment(
    config: RunConfig,
    inputs: RunInputs,
    pathways: list[Pathway],
    service: EnrichmentService,
    stage: OutputStage,
    report: RunReport,
) -> None:
    universe = inputs.matrix.universe
    alpha = config.enrichment.alpha
    selections = inputs.candidates or [CandidateSet(NO_CANDIDATES_LABEL, frozenset())]

    by_label = {
        s.label: service.pathway_overrepresentation(s.genes, pathways, inputs.mapping, universe)
        for s in selections
    }
    write_labeled_enrichment_tsv(by_label, stage.path("pathway_enrichment.tsv"))
    _record(report, "pathway", [r for results in by_label.values() for r in results], alpha)

    if inputs.annotation is None:
        return
    for candidate in inputs.candidates:
        per_namespace = service.go_enrichment(
            candidate.genes, inputs.annotation, universe, alpha
        )
        _write_go_results(
            per_namespace, stage.path("go_enrichment"), candidate.label, "go", report
        )


def _expression_enrichment(
    config: RunConfig,
    inputs: RunInputs,
    pathways: list[Pathway],
    service: EnrichmentService,
    stage: OutputStage,
    report: RunReport,
) -> None:
    """Pathways over-represented among the genes expressed in each condition."""
    matrix = inputs.matrix
    threshold = config.enrichment.expressed_threshold
    by_condition: dict[str, list[EnrichmentResult]] = {}
    for column, label in enumerate(matrix.condition_labels):
        expressed = {
            gene for gene, value in zip(matrix.gene_ids, matrix.values[:, column], strict=True)
            if value > threshold
        }
        by_condition[label] = service.pathway_overrepresentation(
            expressed, pathways, inputs.mapping, matrix.universe
        )
    write_labeled_enrichment_tsv(by_condition, stage.path("pathway_expression_enrichment.tsv"))
    _record(
        report,
        "pathway_expression",
        [r for results in by_condition.values() for r in results],
        config.enrichment.alpha,
    )


def _profiles(
    config: RunConfig,
    design: TimeSeriesDesign,
    inputs: RunInputs,
    service: EnrichmentService,
    stage: OutputStage,
    report: RunReport,
) -> dict[str, tuple[str, ...]]:
    groups = group_profiles(inputs.matrix, design, config.profile)
    write_profiles_tsv(groups, stage.path("profiles.tsv"))
    write_profile_summary(groups, stage.path("profile_summary.tsv"))

    if inputs.annotation is not None:
        per_group = profile_enrichment(
            groups,
            inputs.annotation,
            inputs.matrix.universe,
            config.enrichment.alpha,
            service=service,
        )
        for key, per_namespace in per_group.items():
            _write_go_results(
                per_namespace, stage.path("profile_go_enrichment"), key, "profile_go", report
            )
    return groups


async def _render(
    config: RunConfig,
    inputs: RunInputs,
    pathways: list[Pathway],
    images: dict[PathwayId, bytes],
    groups: dict[str, tuple[str, ...]],
    stage: OutputStage,
    report: RunReport,
) -> None:
    logger = get_run_logger()
    matrix, mapping = inputs.matrix, inputs.mapping
    render = config.render
    scale = build_quantile_scale(matrix.values.ravel(), render.n_bins, render.palette)
    logger.info(f"Quantile breakpoints: {[round(b, 4) for b in scale.breakpoints]}")

    async def render_with_semaphore(
        spec: OverlaySpec, destination: Path, semaphore: asyncio.Semaphore
    ) -> list[str]:
        async with semaphore:
            return await render_pathway_task(spec, destination, render)

    semaphore = asyncio.Semaphore(config.workers)
    jobs = []
    missing: list[tuple[str, str]] = []
    profile_jobs = 0

    for pathway in pathways:
        display = ko_display_values(pathway, matrix, mapping, render.aggregation)
        missing.extend((str(pathway.id), ko) for ko in missing_kos(pathway, display))

        flags = candidate_flags(pathway, inputs.candidates, mapping, matrix.condition_labels)
        spec = _overlay(pathway, images[pathway.id], display, scale, flags, config, matrix)
        jobs.append(
            render_with_semaphore(
                spec, stage.path("pathways", f"{pathway.id}.png"), semaphore
            )
        )

        for key, genes in groups.items():
            group_kos = {ko for gene in genes for ko in mapping.kos_of(gene)} & pathway.ko_ids
            if not group_kos:
                continue
            outline = {ko: [True] * len(matrix.condition_labels) for ko in sorted(group_kos)}
            profile_spec = _overlay(
                pathway, images[pathway.id], display, scale, outline, config, matrix
            )
            destination = stage.path(
                "pathways", "profiles", safe_filename(key), f"{pathway.id}.png"
            )
            jobs.append(render_with_semaphore(profile_spec, destination, semaphore))
            profile_jobs += 1

    for warnings in await asyncio.gather(*jobs):
        for message in warnings:
            if message not in report.warnings:
                report.warn(message)
    write_missing_tsv(missing, stage.path("missing.tsv"))

    report.pathways_rendered = len(pathways)
    report.profile_figures_rendered = profile_jobs
    logger.info(f"Rendered {len(pathways)} pathway overlays, {profile_jobs} profile figures")


def _overlay(
    pathway: Pathway,
    image: bytes,
    display: dict[str, list[float]],
    scale: QuantileScale,
    flags: dict[str, list[bool]],
    config: RunConfig,
    matrix: ExpressionMatrix,
) -> OverlaySpec:
    return OverlaySpec(
        pathway=pathway,
        base_image=image,
        condition_labels=matrix.condition_labels,
        values=display,
        scale=scale,
        candidates=flags,
        aggregation=config.render.aggregation,
    )


def _write_go_results(
    per_namespace: dict[str, NamespaceEnrichment],
    directory: Path,
    label: str,
    family: str,
    report: RunReport,
) -> None:
    """``<label>_<namespace>.tsv`` (all tests) and ``.significant.tsv`` (below alpha)."""
    for namespace, enrichment in per_namespace.items():
        stem = f"{safe_filename(label)}_{safe_filename(namespace)}"
        write_enrichment_tsv(enrichment.results, directory / f"{stem}.tsv")
        write_enrichment_tsv(enrichment.significant, directory / f"{stem}.significant.tsv")
        report.record_family(
            f"{family}.{namespace}", len(enrichment.results), len(enrichment.significant)
        )


def _record(
    report: RunReport, family: str, results: list[EnrichmentResult], alpha: float
) -> None:
    report.record_family(family, len(results), sum(r.passes(alpha) for r in results))
