"""Shared fixtures: the bundled KGML pathway, generated PNGs, caches and HTTP doubles."""

import shutil
from collections.abc import Callable
from pathlib import Path

import httpx
import pytest
from PIL import Image
from prefect.testing.utilities import prefect_test_harness

from clients.kegg_api.client import KeggAPIClient
from clients.kegg_api.config import KeggAPIConfig
from core.config.system import CacheConfig
from core.models.pathways import (
    EntryKind,
    GraphicsBox,
    Pathway,
    PathwayEntry,
    PathwayId,
    ShapeKind,
)
from services.kegg_service import KeggService
from utils.images import encode_png

FIXTURES = Path(__file__).parent / "fixtures"
TOY = FIXTURES / "toy"

DIAGRAM_SIZE = (600, 480)
WHITE = (255, 255, 255)
LISTING = "path:ko00010\tGlycolysis / Gluconeogenesis\n"


@pytest.fixture(autouse=True, scope="session")
def prefect_backend():
    """Flows run against a throwaway local Prefect database."""
    with prefect_test_harness():
        yield


def blank_png(width: int, height: int, color: tuple[int, int, int] = WHITE) -> bytes:
    return encode_png(Image.new("RGB", (width, height), color))


class RequestCounter:
    """httpx MockTransport handler serving canned KEGG answers and counting calls."""

    def __init__(self, routes: dict[str, bytes] | None = None):
        self.routes = routes or {}
        self.requests: list[str] = []

    def __call__(self, request: httpx.Request) -> httpx.Response:
        self.requests.append(request.url.path)
        body = self.routes.get(request.url.path)
        if body is None:
            return httpx.Response(404, content=b"")
        return httpx.Response(200, content=body)

    @property
    def count(self) -> int:
        return len(self.requests)


@pytest.fixture
def kgml_bytes() -> bytes:
    return (FIXTURES / "ko00010.kgml").read_bytes()


@pytest.fixture
def diagram_png() -> bytes:
    return blank_png(*DIAGRAM_SIZE)


@pytest.fixture
def kegg_routes(kgml_bytes, diagram_png) -> dict[str, bytes]:
    return {
        "/list/pathway/ko": LISTING.encode("utf-8"),
        "/get/ko00010/kgml": kgml_bytes,
        "/get/ko00010/image": diagram_png,
    }


@pytest.fixture
def request_counter(kegg_routes) -> RequestCounter:
    return RequestCounter(kegg_routes)


@pytest.fixture
def online_service(tmp_path, request_counter) -> Callable[..., KeggService]:
    """Factory for a KEGG service whose network is a request-counting double."""

    def _make(cache_dir: Path | None = None, refresh: bool = False) -> KeggService:
        client = KeggAPIClient(
            KeggAPIConfig(base_url="https://kegg.test", min_request_interval=0, max_retries=1),
            transport=httpx.MockTransport(request_counter),
        )
        cache = CacheConfig(cache_dir=cache_dir or tmp_path / "cache", refresh=refresh)
        return KeggService(cache, source=client)

    return _make


@pytest.fixture
def warm_cache(tmp_path, kgml_bytes, diagram_png) -> Path:
    """A cache directory already holding the listing, KGML and PNG of ko00010."""
    cache_dir = tmp_path / "kegg_cache"
    org_dir = cache_dir / "ko"
    org_dir.mkdir(parents=True)
    (org_dir / "pathways.list").write_text(LISTING, encoding="utf-8")
    (org_dir / "ko00010.kgml").write_bytes(kgml_bytes)
    (org_dir / "ko00010.png").write_bytes(diagram_png)
    return cache_dir


@pytest.fixture
def toy_inputs(tmp_path) -> dict[str, Path]:
    """Copies of the toy dataset files, safe to modify per test."""
    target = tmp_path / "inputs"
    shutil.copytree(TOY, target)
    return {
        "expr": target / "expression.tsv",
        "ko_map": target / "ko_map.tsv",
        "candidates": target / "candidates.tsv",
        "go": target / "go.tsv",
    }


@pytest.fixture
def make_pathway() -> Callable[..., Pathway]:
    """Pathway with one 46x17 ortholog rectangle per KO group."""

    def _make(
        number: str,
        ko_groups: list[set[str]],
        title: str | None = None,
        org: str = "ko",
    ) -> Pathway:
        entries = tuple(
            PathwayEntry(
                entry_id=i + 1,
                ko_ids=frozenset(kos),
                kind=EntryKind.ORTHOLOG,
                graphics=(
                    GraphicsBox(
                        center_x=40 + 60 * i,
                        center_y=30,
                        width=46,
                        height=17,
                        shape=ShapeKind.RECTANGLE,
                    ),
                ),
            )
            for i, kos in enumerate(ko_groups)
        )
        pathway_id = PathwayId(org_code=org, number=number)
        return Pathway(id=pathway_id, title=title or f"pathway {number}", entries=entries)

    return _make
