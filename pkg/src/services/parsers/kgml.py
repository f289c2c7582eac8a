"""KGML (KEGG Markup Language) pathway parser."""

import logging
import xml.etree.ElementTree as ET
from collections.abc import Mapping

from core.models.expression import KO_PATTERN
from core.models.pathways import (
    EntryKind,
    GraphicsBox,
    Pathway,
    PathwayEntry,
    PathwayId,
    ShapeKind,
)
from utils.exceptions import BadCoordinate, KgmlError, MissingAttribute, XmlSyntax

logger = logging.getLogger(__name__)

KO_PREFIX = "ko:"
BOX_ATTRIBUTES = ("x", "y", "width", "height")


class KgmlParser:
    """
    Turns a KGML document into a ``Pathway``.

    Gene entries of organism-specific maps name organism genes rather than
    KOs; ``ko_links`` (``org:gene`` -> KOs) resolves them.
    """

    def __init__(
        self,
        ko_links: Mapping[str, frozenset[str]] | None = None,
        source: str | None = None,
    ):
        self.ko_links = ko_links or {}
        self.source = source

    def parse(self, xml: bytes) -> Pathway:
        try:
            root = ET.fromstring(xml)
        except ET.ParseError as e:
            raise XmlSyntax(e.position, str(e), self.source) from e

        if root.tag != "pathway":
            raise KgmlError(f"root element is <{root.tag}>, expected <pathway>", self.source)

        pathway_id = self._pathway_id(root)
        title = root.get("title") or str(pathway_id)
        entries = tuple(self._entry(element) for element in root.findall("entry"))

        try:
            pathway = Pathway(id=pathway_id, title=title, entries=entries)
        except ValueError as e:
            raise KgmlError(str(e), self.source) from e

        logger.debug(f"Parsed {pathway_id}: {len(entries)} entries")
        return pathway

    def _pathway_id(self, root: ET.Element) -> PathwayId:
        name = self._require(root, "name")
        try:
            return PathwayId.parse(name)
        except ValueError:
            pass
        org, number = root.get("org"), root.get("number")
        if org and number:
            try:
                return PathwayId(org_code=org, number=number)
            except ValueError:
                pass
        raise KgmlError(f"cannot derive a pathway id from name '{name}'", self.source)

    def _entry(self, element: ET.Element) -> PathwayEntry:
        raw_id = self._require(element, "id")
        try:
            entry_id = int(raw_id)
        except ValueError as e:
            raise KgmlError(f"entry id '{raw_id}' is not numeric", self.source) from e

        names = self._require(element, "name").split()
        kind_label = self._require(element, "type")
        kind = EntryKind.from_label(kind_label)

        ko_ids: frozenset[str] = frozenset()
        if kind in (EntryKind.ORTHOLOG, EntryKind.GENE):
            ko_ids = self._resolve_kos(names)
            if not ko_ids:
                logger.warning(
                    f"Entry {entry_id} ({kind_label}) resolves to no KO; "
                    f"kept as other({kind_label})"
                )
                kind = EntryKind.OTHER

        graphics = tuple(self._graphics(raw_id, g) for g in element.findall("graphics"))
        return PathwayEntry(
            entry_id=entry_id,
            ko_ids=ko_ids,
            kind=kind,
            graphics=graphics,
            kind_label=kind_label,
        )

    def _resolve_kos(self, names: list[str]) -> frozenset[str]:
        kos: set[str] = set()
        for name in names:
            if name.startswith(KO_PREFIX):
                ko = name[len(KO_PREFIX) :]
                if KO_PATTERN.match(ko):
                    kos.add(ko)
            else:
                kos.update(self.ko_links.get(name, ()))
        return frozenset(kos)

    def _graphics(self, entry_id: str, element: ET.Element) -> GraphicsBox:
        shape_label = element.get("type", ShapeKind.RECTANGLE.value)
        shape = ShapeKind.from_label(shape_label)

        if shape is ShapeKind.LINE and element.get("coords"):
            cx, cy, width, height = self._line_extent(entry_id, element.get("coords", ""))
        else:
            cx, cy, width, height = (
                self._number(entry_id, attr, self._require(element, attr))
                for attr in BOX_ATTRIBUTES
            )

        try:
            return GraphicsBox(
                center_x=cx,
                center_y=cy,
                width=width,
                height=height,
                shape=shape,
                shape_label=shape_label,
            )
        except ValueError as e:
            raise BadCoordinate(entry_id, str(e), self.source) from e

    def _line_extent(self, entry_id: str, coords: str) -> tuple[float, float, float, float]:
        values = [self._number(entry_id, "coords", v) for v in coords.split(",")]
        if len(values) < 4 or len(values) % 2:
            raise BadCoordinate(entry_id, f"malformed line coords '{coords}'", self.source)
        xs, ys = values[0::2], values[1::2]
        return (
            (min(xs) + max(xs)) / 2,
            (min(ys) + max(ys)) / 2,
            max(xs) - min(xs),
            max(ys) - min(ys),
        )

    def _number(self, entry_id: str, attr: str, raw: str) -> float:
        try:
            value = float(raw)
        except ValueError as e:
            raise BadCoordinate(entry_id, f"{attr}='{raw}' is not a number", self.source) from e
        if value != value or value in (float("inf"), float("-inf")):
            raise BadCoordinate(entry_id, f"{attr}='{raw}' is not finite", self.source)
        return value

    def _require(self, element: ET.Element, attr: str) -> str:
        value = element.get(attr)
        if value is None:
            raise MissingAttribute(element.tag, attr, self.source)
        return value


def parse_kgml(
    xml: bytes,
    ko_links: Mapping[str, frozenset[str]] | None = None,
    source: str | None = None,
) -> Pathway:
    """Parse one KGML document."""
    return KgmlParser(ko_links=ko_links, source=source).parse(xml)
