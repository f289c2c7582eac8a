import asyncio
from pathlib import Path

from prefect import task
from prefect.cache_policies import NONE
from prefect.logging import get_run_logger

from core.config.services import RenderConfig
from core.models.rendering import OverlaySpec
from services.render_service import render_overlay
from services.report_service import write_bytes


@task(
    name="Render Overlay",
    description="Paint one pathway overlay and write it as PNG",
    retries=0,
    retry_delay_seconds=30,
    timeout_seconds=None,
    cache_policy=NONE,
    task_run_name="render-{destination.stem}",
)
async def render_pathway_task(
    spec: OverlaySpec,
    destination: Path,
    config: RenderConfig,
) -> list[str]:
    """
    Render one overlay in a worker thread and write it to ``destination``.

    Returns:
        Warnings raised while painting, e.g. boxes too narrow for one
        stripe per condition
    """
    logger = get_run_logger()
    warnings: list[str] = []
    png = await asyncio.to_thread(
        render_overlay,
        spec,
        legend_height=config.legend_height,
        outline_width=config.outline_width,
        warnings=warnings,
    )
    write_bytes(destination, png)
    logger.debug(f"Wrote {destination}")
    return warnings
