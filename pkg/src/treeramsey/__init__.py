"""Combinatorial toolkit for Ramsey numbers of trees.

Computes exact Ramsey numbers of small trees, builds and verifies the two
Burr extremal 2-colorings, provides the tree-decomposition lemma suite
(splits, cutsets, sparse cuts, the 8-vertex-path homomorphism), and runs
constructive monochromatic tree embeddings against near-extremal colorings
of complete graphs.
"""

from treeramsey.errors import HypothesisError
from treeramsey.trees import Tree, Bipartition, enumerate_trees, canonical_code, bipartition, pad_to_balanced
from treeramsey.rbgraph import RBGraph, burr_type1, burr_type2, perturb, detect_extremal, ExtremalWitness
from treeramsey.constants import DeskConstants

__all__ = [
    "HypothesisError",
    "Tree",
    "Bipartition",
    "enumerate_trees",
    "canonical_code",
    "bipartition",
    "pad_to_balanced",
    "RBGraph",
    "burr_type1",
    "burr_type2",
    "perturb",
    "detect_extremal",
    "ExtremalWitness",
    "DeskConstants",
]

__version__ = "0.1.0"
