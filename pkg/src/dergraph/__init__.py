"""Derangement graphs of finite permutation groups and their extremal structure."""

from dergraph.constructions import multipartite_construction, standard_family
from dergraph.extremal import ekr_flags, intersection_density, max_clique, max_coclique
from dergraph.graph import build_graph, compute_H_G, join_decomposition
from dergraph.perms import Permutation, PermutationGroup, generate_group, parse_permutation
from dergraph.report import analyze_group

__all__ = [
    "Permutation",
    "PermutationGroup",
    "analyze_group",
    "build_graph",
    "compute_H_G",
    "ekr_flags",
    "generate_group",
    "intersection_density",
    "join_decomposition",
    "max_clique",
    "max_coclique",
    "multipartite_construction",
    "parse_permutation",
    "standard_family",
]
