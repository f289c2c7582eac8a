"""
Clients for external data sources.

Only KEGG is reached: over REST, or through on-disk fixtures in offline mode.
"""

from clients.kegg_api import FixtureLoader, KeggAPIClient, KeggAPIConfig, KeggSource

__all__ = ["FixtureLoader", "KeggAPIClient", "KeggAPIConfig", "KeggSource"]
