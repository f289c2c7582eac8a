"""
pathmap - Root Module

Pathway-level integration of multi-condition and time-series expression data
with KEGG pathway diagrams.
"""

__version__ = "0.1.0"
