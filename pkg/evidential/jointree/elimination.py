from itertools import combinations
from typing import FrozenSet, List, Sequence, Tuple

import networkx as nx

from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError
from evidential.core.logging_config import get_logger
from evidential.jointree.tree import Hyperedge

logger = get_logger(__name__)


def _fill_in(graph: nx.Graph, node: str) -> int:
    neighbors = list(graph.neighbors(node))
    return sum(1 for u, w in combinations(neighbors, 2) if not graph.has_edge(u, w))


def min_fill_order(graph: nx.Graph) -> List[Tuple[str, FrozenSet[str]]]:
    """Eliminate by least fill-in, ties by name; yields (variable, clique)"""
    working = nx.Graph(graph)
    order = []
    while working.number_of_nodes():
        chosen = min(working.nodes, key=lambda n: (_fill_in(working, n), n))
        neighbors = sorted(working.neighbors(chosen))
        working.add_edges_from(combinations(neighbors, 2))
        order.append((chosen, frozenset(neighbors) | {chosen}))
        working.remove_node(chosen)
    return order


def eliminate_variable(family: Sequence[Hyperedge], name: str) -> List[Hyperedge]:
    """Fuse the hyperedges containing ``name`` and sum the variable out"""
    touched = [h for h in family if name in h.scope]
    if not touched:
        raise InvalidModelError(f"variable {name} occurs in no hyperedge")
    scope = touched[0].scope
    for hyperedge in touched[1:]:
        scope = scope.union(hyperedge.scope)
    scope.check_capacity()
    combined = MassFunction.vacuous(scope)
    for hyperedge in touched:
        combined = combined.combine(hyperedge.local.extend(scope))
    reduced = combined.marginalize(scope.without([name]))
    logger.debug(f"eliminated {name}: fused {len(touched)} hyperedge(s) over {scope}")
    return [h for h in family if name not in h.scope] + [Hyperedge.of(reduced)]
