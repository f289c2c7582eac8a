"""
KEGG pathway retrieval with a mandatory on-disk cache.

Every artifact (pathway listing, KGML, diagram PNG, gene->KO link table) is
looked up in the cache first and only fetched from the source on a miss.
The source is either the rate-limited REST client or, in offline mode, a
fixture loader rooted at the cache directory itself.
"""

import logging
import threading
from collections.abc import Callable
from dataclasses import replace
from pathlib import Path
from typing import TypeVar

from clients.kegg_api.client import KeggAPIClient
from clients.kegg_api.config import KeggAPIConfig
from clients.kegg_api.fixtures import FixtureLoader
from clients.kegg_api.models import KeggSource
from core.config.system import CacheConfig
from core.models.pathways import Pathway, PathwayId
from services.parsers.kgml import parse_kgml
from utils.exceptions import DimensionMismatch, IoError
from utils.images import decode_png

logger = logging.getLogger(__name__)

KO_ORG = "ko"

T = TypeVar("T")


class KeggService:
    """High-level, cache-first access to KEGG pathways."""

    def __init__(
        self,
        cache: CacheConfig | None = None,
        source: KeggSource | None = None,
        api_config: KeggAPIConfig | None = None,
    ):
        """
        Initialize the KEGG service.

        Args:
            cache: Cache location and mode. Uses defaults if not provided.
            source: Explicit artifact source; defaults to the fixture loader in
                offline mode and the REST client otherwise.
            api_config: REST client configuration for online mode.
        """
        self.cache = cache or CacheConfig()
        if source is None:
            if self.cache.offline:
                source = FixtureLoader(self.cache.cache_dir)
            else:
                source = KeggAPIClient(api_config)
        self.source = source

        # Single writer: fetch-and-store of a missing artifact is serialized
        self._fetch_lock = threading.Lock()
        self._refreshed: set[Path] = set()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

    def close(self) -> None:
        self.source.close()

    def list_pathways(self, org_code: str) -> list[PathwayId]:
        """
        Sorted, deduplicated pathway ids for an organism.

        Raises:
            NetworkError: Online mode with a cold cache and no connectivity
            FixtureMissing: Offline mode without a cached listing
        """
        path = self.cache.listing_path(org_code)
        pathway_ids = self._cached(
            path,
            lambda: self.source.list_pathways(org_code).encode("utf-8"),
            lambda raw: parse_pathway_listing(raw.decode("utf-8"), org_code),
        )
        logger.info(f"Found {len(pathway_ids)} pathways for organism '{org_code}'")
        return pathway_ids

    def fetch_pathway(self, pathway_id: PathwayId) -> tuple[Pathway, bytes]:
        """
        Resolve KGML and diagram of one pathway through the cache.

        Returns:
            The parsed pathway with image dimensions recorded, and the PNG bytes

        Raises:
            NetworkError, FixtureMissing: Artifact not retrievable
            KgmlError: KGML does not parse
            ImageDecodeError: PNG does not decode
            DimensionMismatch: KGML boxes exceed the image beyond tolerance
        """
        org, key = pathway_id.org_code, str(pathway_id)
        kgml_path = self.cache.kgml_path(org, key)
        image_path = self.cache.image_path(org, key)

        ko_links = self.load_ko_links(org) if org != KO_ORG else None
        pathway = self._cached(
            kgml_path,
            lambda: self.source.get_kgml(key),
            lambda raw: parse_kgml(raw, ko_links=ko_links, source=str(kgml_path)),
        )
        image, (width, height) = self._cached(
            image_path,
            lambda: self.source.get_image(key),
            lambda raw: (raw, decode_png(raw, source=str(image_path)).size),
        )

        out_of_bounds = pathway.out_of_bounds_entries(width, height)
        if out_of_bounds:
            raise DimensionMismatch(str(out_of_bounds[0]), (width, height), key)

        return replace(pathway, image_width=width, image_height=height), image

    def load_ko_links(self, org_code: str) -> dict[str, frozenset[str]]:
        """``org:gene`` -> KOs, from KEGG's ``link/ko/<org>`` table."""
        path = self.cache.ko_link_path(org_code)
        return self._cached(
            path,
            lambda: self.source.link_ko(org_code).encode("utf-8"),
            lambda raw: parse_ko_links(raw.decode("utf-8")),
        )

    def _cached(self, path: Path, fetch: Callable[[], bytes], decode: Callable[[bytes], T]) -> T:
        """
        Decoded artifact from the cache, or from the source on a miss.

        A fetched artifact is stored only after ``decode`` accepted it, so a
        truncated or malformed answer is fetched again on the next run.
        """
        with self._fetch_lock:
            stale = self.cache.refresh and path not in self._refreshed
            if not stale and path.is_file() and path.stat().st_size > 0:
                logger.debug(f"Cache hit: {path}")
                return decode(path.read_bytes())

            logger.info(f"Fetching {path.name}")
            data = fetch()
            decoded = decode(data)
            if not self.cache.offline:
                _write_atomic(path, data)
            self._refreshed.add(path)
            return decoded


def parse_pathway_listing(text: str, org_code: str) -> list[PathwayId]:
    """Pathway ids from a ``list/pathway`` answer; generic ``map`` ids are rebased."""
    found: set[PathwayId] = set()
    for line in text.splitlines():
        if not line.strip():
            continue
        raw_id = line.split("\t", 1)[0]
        try:
            pathway_id = PathwayId.parse(raw_id)
        except ValueError:
            logger.warning(f"Skipping malformed pathway list line: {line!r}")
            continue
        if pathway_id.org_code == "map":
            pathway_id = PathwayId(org_code=org_code, number=pathway_id.number)
        if pathway_id.org_code != org_code:
            logger.debug(f"Skipping pathway outside org {org_code}: {pathway_id}")
            continue
        found.add(pathway_id)
    return sorted(found)


def parse_ko_links(text: str) -> dict[str, frozenset[str]]:
    """``org:gene`` -> KOs from a ``link/ko/<org>`` answer; other lines are ignored."""
    links: dict[str, set[str]] = {}
    for line in text.splitlines():
        parts = line.strip().split("\t")
        if len(parts) != 2 or not parts[1].startswith("ko:"):
            continue
        links.setdefault(parts[0], set()).add(parts[1][len("ko:") :])
    return {gene: frozenset(kos) for gene, kos in links.items()}


def _write_atomic(path: Path, data: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_bytes(data)
        tmp.replace(path)
    except OSError as e:
        raise IoError(str(path), str(e)) from e
