"""Probabilistic principle-based parsing.

Binary proper branches are proposed bottom-up and licensed by X-bar, theta
and Case modules; complete parses are ranked by the product of their X-bar
and theta probabilities, both estimated from a small bracketed corpus.
"""

from .model import (
    Case, Category, LexicalEntry, Lexicon, PhraseMarker, ProperBranch,
    SyntacticNode, ThetaGrid, ThetaRole, leaf_node, project,
)
from .engine import ParseForest, enumerate_markers, parse
from .ranking import RankedParse, rank, score

__version__ = "0.1.0"

__all__ = [
    "Case", "Category", "LexicalEntry", "Lexicon", "PhraseMarker",
    "ProperBranch", "SyntacticNode", "ThetaGrid", "ThetaRole", "leaf_node",
    "project", "ParseForest", "enumerate_markers", "parse", "RankedParse",
    "rank", "score",
]
