"""Interface shared by the network client and the offline fixture loader."""

from typing import Protocol


class KeggSource(Protocol):
    def list_pathways(self, org_code: str) -> str: ...

    def get_kgml(self, pathway_id: str) -> bytes: ...

    def get_image(self, pathway_id: str) -> bytes: ...

    def link_ko(self, org_code: str) -> str: ...

    def close(self) -> None: ...
