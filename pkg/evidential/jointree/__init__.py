from evidential.jointree.construction import build_join_tree
from evidential.jointree.elimination import eliminate_variable, min_fill_order
from evidential.jointree.propagation import node_marginal, propagate
from evidential.jointree.queries import network_family, query_marginal
from evidential.jointree.tree import CombinationMode, Hyperedge, JoinTree, TreeNode

__all__ = [
    "CombinationMode",
    "Hyperedge",
    "JoinTree",
    "TreeNode",
    "build_join_tree",
    "eliminate_variable",
    "min_fill_order",
    "network_family",
    "node_marginal",
    "propagate",
    "query_marginal",
]
