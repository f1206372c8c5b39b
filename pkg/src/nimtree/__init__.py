"""Counting and classifying trees whose maximum eigenvalue multiplicity
forces every other eigenvalue to be simple."""

from .errors import NimTreeError
from .tree import Tree, canonical_code, enumerate_free_trees, parse_edge_list

__version__ = "0.1.0"

__all__ = ["NimTreeError", "Tree", "canonical_code", "enumerate_free_trees", "parse_edge_list"]
