"""
Configuration for on-disk locations.

The KEGG cache location honours ``PATHMAP_CACHE_DIR``; everything else is
set per run.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_CACHE_DIR = Path.home() / ".cache" / "pathmap"


def _default_cache_dir() -> Path:
    override = os.getenv("PATHMAP_CACHE_DIR")
    return Path(override) if override else DEFAULT_CACHE_DIR


@dataclass
class CacheConfig:
    """Where KEGG artifacts live and how they are resolved."""

    cache_dir: Path = field(default_factory=_default_cache_dir)
    offline: bool = False
    refresh: bool = False

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir).expanduser()
        if self.offline and self.refresh:
            raise ValueError("refresh cannot be combined with offline mode")

    def org_dir(self, org_code: str) -> Path:
        return self.cache_dir / org_code

    def listing_path(self, org_code: str) -> Path:
        return self.org_dir(org_code) / "pathways.list"

    def ko_link_path(self, org_code: str) -> Path:
        return self.org_dir(org_code) / "ko.link"

    def kgml_path(self, org_code: str, pathway_id: str) -> Path:
        return self.org_dir(org_code) / f"{pathway_id}.kgml"

    def image_path(self, org_code: str, pathway_id: str) -> Path:
        return self.org_dir(org_code) / f"{pathway_id}.png"
