"""Graph reduction along symmetry axes, cut vertices and bridges ahead of a
simulated amplitude-amplified K-colouring search."""

from .estimator import compare_techniques, report
from .graph import (
    ColoringSequence,
    DimacsError,
    Graph,
    GraphError,
    NodeMap,
    build_graph,
    induced_subgraph,
    is_valid_coloring,
    parse_dimacs,
    serialize_dimacs,
)
from .pipeline import ColoringResult, Unsolvable, color_graph, solve_tree
from .reconstruct import ReconstructionError, reconstruct_tree
from .reducer import ReductionTree, cut, reduce_recursive, reglue
from .symmetry import Axis, DisconnectedGraphError, ReductionPolicy, enumerate_axes, select_axis

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "ColoringResult",
    "ColoringSequence",
    "DimacsError",
    "DisconnectedGraphError",
    "Graph",
    "GraphError",
    "NodeMap",
    "ReconstructionError",
    "ReductionPolicy",
    "ReductionTree",
    "Unsolvable",
    "build_graph",
    "color_graph",
    "compare_techniques",
    "cut",
    "enumerate_axes",
    "induced_subgraph",
    "is_valid_coloring",
    "parse_dimacs",
    "reconstruct_tree",
    "reduce_recursive",
    "reglue",
    "report",
    "select_axis",
    "serialize_dimacs",
    "solve_tree",
]
