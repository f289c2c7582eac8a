"""KEGG REST client and its offline fixture counterpart."""

from clients.kegg_api.client import KeggAPIClient, RateLimiter
from clients.kegg_api.config import KeggAPIConfig
from clients.kegg_api.fixtures import FixtureLoader
from clients.kegg_api.models import KeggSource

__all__ = ["FixtureLoader", "KeggAPIClient", "KeggAPIConfig", "KeggSource", "RateLimiter"]
