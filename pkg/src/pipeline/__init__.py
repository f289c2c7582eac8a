"""
pathmap pipeline package.

Integrates expression or abundance data from multiple conditions or time
series with KEGG pathway diagrams:

- Cache-first KEGG retrieval with an offline fixture mode
- Pathway over-representation and per-namespace GO enrichment
- Time-series profile grouping
- Quantile-colored pathway overlays with candidate outlines
- Deterministic TSV reports
"""

__version__ = "0.1.0"
__description__ = "Pathway-level integration of expression data with KEGG diagrams"

__all__ = [
    "__description__",
    "__version__",
]
