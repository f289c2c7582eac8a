import asyncio

from prefect import task
from prefect.cache_policies import NONE
from prefect.logging import get_run_logger

from clients.kegg_api.exceptions import KeggNotFoundError
from core.models.pathways import Pathway, PathwayId
from services.kegg_service import KeggService


@task(
    name="Fetch Pathway",
    description="Resolve one pathway's KGML and diagram through the KEGG cache",
    retries=0,
    retry_delay_seconds=30,
    timeout_seconds=None,
    cache_policy=NONE,
    task_run_name="fetch-{pathway_id}",
)
async def fetch_pathway_task(
    kegg: KeggService,
    pathway_id: PathwayId,
    strict: bool = True,
) -> tuple[Pathway, bytes] | None:
    """
    Resolve one pathway in a worker thread.

    The KEGG client owns retries and rate limiting, so the task itself is
    never retried.

    Args:
        kegg: Cache-first KEGG service
        pathway_id: Pathway to resolve
        strict: When False, a pathway KEGG has no KGML for is skipped with a
            warning instead of failing the run

    Returns:
        (pathway, PNG bytes), or None when the pathway was skipped
    """
    logger = get_run_logger()
    try:
        return await asyncio.to_thread(kegg.fetch_pathway, pathway_id)
    except KeggNotFoundError:
        if strict:
            raise
        logger.warning(f"{pathway_id}: KEGG has no KGML for this pathway, skipped")
        return None
