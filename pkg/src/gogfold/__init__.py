"""Graphs of groups over free and free abelian vertex groups.

Word problems (free reduction, Stallings graphs, Britton normal forms),
G(A)-graph folding with induced splittings, Betti numbers, and matching of
small splittings against a fixed list of shapes.
"""
from .errors import GogError
from .gog import GraphOfGroups, betti, relative_presentation
from .groups import FreeAbelianGroup, FreeGroup, NestedGroup

__version__ = "0.1.0"

__all__ = ["GogError", "GraphOfGroups", "betti", "relative_presentation",
           "FreeAbelianGroup", "FreeGroup", "NestedGroup", "__version__"]
