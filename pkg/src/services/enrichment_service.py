"""
Pathway over-representation and GO term enrichment.

The background is always the universe handed in by the caller (the genes of
the expression matrix). Each analysis unit is its own BH family: all pathways
together, every GO namespace separately.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from core.models.enrichment import ContingencyTable, EnrichmentResult, NamespaceEnrichment
from core.models.expression import GoAnnotation, KoMapping
from core.models.pathways import Pathway
from services.statistics import bh_adjust, fisher_exact_greater
from utils.exceptions import DomainError, EmptyUniverse

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Category:
    term_id: str
    term_name: str
    members: frozenset[str]


class EnrichmentService:
    """One-sided Fisher tests with BH correction over a fixed gene universe."""

    def pathway_overrepresentation(
        self,
        selected: Iterable[str],
        pathways: Sequence[Pathway],
        mapping: KoMapping,
        universe: Iterable[str],
    ) -> list[EnrichmentResult]:
        """
        Test every pathway with at least one universe gene mapped into it.

        A gene is in a pathway when any of its KOs appears in any of the
        pathway's ortholog or gene entries.

        Raises:
            EmptyUniverse: If the universe is empty
        """
        universe_set = self._require_universe(universe)
        chosen = self._restrict(selected, universe_set)
        genes_by_ko = mapping.genes_by_ko(restrict_to=universe_set)

        categories = []
        for pathway in sorted(pathways, key=lambda p: p.id):
            members: set[str] = set()
            for ko in pathway.ko_ids:
                members.update(genes_by_ko.get(ko, ()))
            if not members:
                logger.debug(f"{pathway.id}: no universe gene maps into it, not tested")
                continue
            categories.append(_Category(str(pathway.id), pathway.title, frozenset(members)))

        results = self._test_family(chosen, len(universe_set), categories)
        logger.info(
            f"Pathway over-representation: {len(results)} of {len(pathways)} pathways tested, "
            f"{len(chosen)} selected genes"
        )
        return results

    def go_enrichment(
        self,
        selected: Iterable[str],
        annotation: GoAnnotation,
        universe: Iterable[str],
        alpha: float,
    ) -> dict[str, NamespaceEnrichment]:
        """
        Per-namespace GO enrichment; each namespace is its own BH family.

        Returns:
            Namespace -> full results; ``.significant`` holds those below alpha

        Raises:
            EmptyUniverse: If the universe is empty
            DomainError: If alpha is outside (0, 1]
        """
        if not 0.0 < alpha <= 1.0:
            raise DomainError(f"alpha must be in (0, 1], got {alpha}")

        universe_set = self._require_universe(universe)
        chosen = self._restrict(selected, universe_set)
        genes_by_term = annotation.genes_by_term(restrict_to=universe_set)

        enrichment: dict[str, NamespaceEnrichment] = {}
        for namespace in annotation.namespaces:
            categories = [
                _Category(term.term_id, term.name, frozenset(genes_by_term[term.term_id]))
                for term in annotation.terms_in(namespace)
                if genes_by_term.get(term.term_id)
            ]
            results = self._test_family(chosen, len(universe_set), categories)
            enrichment[namespace] = NamespaceEnrichment(
                namespace=namespace, alpha=alpha, results=tuple(results)
            )
            logger.debug(
                f"GO {namespace}: {len(results)} terms tested, "
                f"{len(enrichment[namespace].significant)} significant"
            )
        return enrichment

    def _test_family(
        self,
        selected: frozenset[str],
        universe_size: int,
        categories: list[_Category],
    ) -> list[EnrichmentResult]:
        tables = [
            ContingencyTable.from_sets(selected, set(c.members), universe_size)
            for c in categories
        ]
        p_values = [fisher_exact_greater(table) for table in tables]
        adjusted = bh_adjust(p_values)

        results = [
            EnrichmentResult(
                term_id=category.term_id,
                term_name=category.term_name,
                table=table,
                p_value=p,
                p_adjusted=p_adj,
                hit_genes=tuple(sorted(selected & category.members)),
            )
            for category, table, p, p_adj in zip(
                categories, tables, p_values, adjusted, strict=True
            )
        ]
        return sorted(results, key=lambda r: r.sort_key)

    def _require_universe(self, universe: Iterable[str]) -> frozenset[str]:
        universe_set = frozenset(universe)
        if not universe_set:
            raise EmptyUniverse()
        return universe_set

    def _restrict(self, selected: Iterable[str], universe: frozenset[str]) -> frozenset[str]:
        chosen = frozenset(selected)
        outside = chosen - universe
        if outside:
            logger.warning(
                f"{len(outside)} selected genes are not in the universe and are ignored: "
                f"{sorted(outside)[:5]}"
            )
        return chosen & universe
