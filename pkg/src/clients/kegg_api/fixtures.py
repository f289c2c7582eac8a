"""Offline stand-in for the KEGG REST client.

Reads artifacts laid out exactly like the cache
(``<root>/<org>/pathways.list``, ``<root>/<org>/<id>.kgml``, ``.png``).
"""

import logging
from pathlib import Path

from clients.kegg_api.exceptions import FixtureMissing

logger = logging.getLogger(__name__)


class FixtureLoader:
    """Serves KEGG artifacts from a directory instead of the network."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def close(self):
        """Nothing to release; mirrors the network client."""

    def list_pathways(self, org_code: str) -> str:
        return self._read(self.root / org_code / "pathways.list").decode("utf-8")

    def get_kgml(self, pathway_id: str) -> bytes:
        return self._read(self._pathway_dir(pathway_id) / f"{pathway_id}.kgml")

    def get_image(self, pathway_id: str) -> bytes:
        return self._read(self._pathway_dir(pathway_id) / f"{pathway_id}.png")

    def link_ko(self, org_code: str) -> str:
        return self._read(self.root / org_code / "ko.link").decode("utf-8")

    def _pathway_dir(self, pathway_id: str) -> Path:
        return self.root / pathway_id.rstrip("0123456789")

    def _read(self, path: Path) -> bytes:
        if not path.is_file():
            raise FixtureMissing(str(path))
        logger.debug(f"Loaded fixture {path}")
        return path.read_bytes()
