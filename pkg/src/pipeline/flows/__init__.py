"""
Flows for the pathmap pipeline.

This module contains the orchestration flows: the full analysis run and
the cache pre-warming fetch.
"""

from pipeline.flows.fetch_flow import fetch_flow
from pipeline.flows.main_pipeline_flow import main_pipeline_flow

__all__ = [
    "fetch_flow",
    "main_pipeline_flow",
]
