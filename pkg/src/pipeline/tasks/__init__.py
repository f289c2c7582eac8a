"""
Tasks for the pathmap pipeline.

Each task does one unit of pathway-level work: resolving a pathway through
the KEGG cache or rendering one overlay in a worker thread.
"""

from pipeline.tasks.fetch_task import fetch_pathway_task
from pipeline.tasks.render_task import render_pathway_task

__all__ = [
    "fetch_pathway_task",
    "render_pathway_task",
]
