from evidential.network.belief_network import BeliefNetwork, build_network, remove_leaf
from evidential.network.dag import Dag
from evidential.network.dseparation import d_separated
from evidential.network.evidence import EvidenceSet
from evidential.network.factorization import (
    factorize_joint,
    joint_distribution,
    pseudo_condition,
)
from evidential.network.valuation import NodeValuation, ValuationKind

__all__ = [
    "BeliefNetwork",
    "Dag",
    "EvidenceSet",
    "NodeValuation",
    "ValuationKind",
    "build_network",
    "d_separated",
    "factorize_joint",
    "joint_distribution",
    "pseudo_condition",
    "remove_leaf",
]
