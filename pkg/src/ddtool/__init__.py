"""Definite-description toolkit: treebank reading, the-NP extraction,
heuristic classification, annotation collection, and agreement statistics."""

__version__ = "0.1.0"
