"""Separator-driven depth-first search, planar separators and maximal paths."""

from .graph import BugSignal, Graph, GraphError
from .embedding import Embedding, euler_genus, planar_embed, trace_faces
from .separators import (HALF, TWO_THIRDS, SeparatorReport, WeightAssignment, check_separator_balance,
                         cycle_separator, directed_path_separator, kao_merge_pair, merge_multipath,
                         undirected_dfs_path_separator)
from .genus import genus_multipath_separator, genus_path_separator
from .cliquesum import CliqueSumTree, build_clique_sum_tree, find_central_node
from .scm import compute_dpc, build_gadget, lift_cycle, project_weights, scm_separator, tw_path_separator
from .dfs import lex_dfs, lex_dfs_edge_test, mso_eval_phi_dfs, separator_dfs, verify_dfs_tree
from .maxpath import maximal_path, verify_maximal

__all__ = [
    "BugSignal", "Graph", "GraphError", "Embedding", "euler_genus", "planar_embed", "trace_faces",
    "HALF", "TWO_THIRDS", "SeparatorReport", "WeightAssignment", "check_separator_balance", "cycle_separator",
    "directed_path_separator", "kao_merge_pair", "merge_multipath", "undirected_dfs_path_separator",
    "genus_multipath_separator", "genus_path_separator", "CliqueSumTree", "build_clique_sum_tree",
    "find_central_node", "compute_dpc", "build_gadget", "lift_cycle", "project_weights", "scm_separator",
    "tw_path_separator", "lex_dfs", "lex_dfs_edge_test", "mso_eval_phi_dfs", "separator_dfs", "verify_dfs_tree",
    "maximal_path", "verify_maximal",
]

__version__ = "0.1.0"
