from prefect import flow, get_run_logger

from core.models.pathways import Pathway, PathwayId
from pipeline.tasks import fetch_pathway_task
from services.kegg_service import KO_ORG, KeggService


@flow(
    name="fetch_pathways",
    description="Resolve pathways through the KEGG cache, one request at a time",
    version="1.0.0",
    retries=0,
    retry_delay_seconds=60,
    timeout_seconds=None,
    validate_parameters=False,
)
async def fetch_flow(
    org_code: str,
    kegg: KeggService,
    pathway_ids: list[PathwayId] | None = None,
) -> list[tuple[Pathway, bytes]]:
    """
    Resolve the pathways of one organism, warming the cache as it goes.

    An explicit pathway list is fetched strictly and never touches the
    organism listing. Without one, the whole listing is fetched and
    pathways KEGG has no KGML for are skipped.

    Fetch tasks are awaited one after another: KEGG never sees parallel
    requests.

    Returns:
        (pathway, PNG bytes) pairs in pathway id order
    """
    logger = get_run_logger()
    logger.info(f"Resolving KEGG pathways for '{org_code}'")

    strict = bool(pathway_ids)
    ids = sorted(set(pathway_ids)) if pathway_ids else kegg.list_pathways(org_code)
    if org_code != KO_ORG:
        kegg.load_ko_links(org_code)

    resolved: list[tuple[Pathway, bytes]] = []
    for pathway_id in ids:
        fetched = await fetch_pathway_task(kegg, pathway_id, strict=strict)
        if fetched is not None:
            resolved.append(fetched)

    logger.info(f"Resolved {len(resolved)} of {len(ids)} pathways for '{org_code}'")
    return resolved
