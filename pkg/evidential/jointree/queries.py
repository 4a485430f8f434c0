from typing import List, Optional

from evidential.algebra.mass import MassFunction
from evidential.core.logging_config import get_logger
from evidential.jointree.construction import build_join_tree
from evidential.jointree.propagation import node_marginal, propagate
from evidential.jointree.tree import CombinationMode, Hyperedge
from evidential.network.belief_network import BeliefNetwork
from evidential.network.evidence import EvidenceSet

logger = get_logger(__name__)


def network_family(
    net: BeliefNetwork, evidence: Optional[EvidenceSet] = None
) -> List[Hyperedge]:
    """Hyperedges of the lowered valuations followed by the findings"""
    family = [Hyperedge.of(m) for m in net.lowered]
    if evidence is not None:
        family.extend(Hyperedge.of(m) for m in evidence.hyperedges(net))
    return family


def query_marginal(
    net: BeliefNetwork, name: str, evidence: Optional[EvidenceSet] = None
) -> MassFunction:
    """Posterior mass function of one variable given the findings"""
    target = net.scope_of([name])
    tree = build_join_tree(network_family(net, evidence), target)
    tree = propagate(tree, CombinationMode.SUM_PRODUCT)
    marginal = node_marginal(tree, tree.root).marginalize(target).normalize()
    logger.debug(f"marginal of {name} computed on a {len(tree)}-node join tree")
    return marginal
