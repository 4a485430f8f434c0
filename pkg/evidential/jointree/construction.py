from itertools import combinations
from typing import Dict, List, Sequence

import networkx as nx

from evidential.algebra.frames import Scope
from evidential.core.exceptions import InvalidModelError
from evidential.core.logging_config import get_logger
from evidential.jointree.elimination import min_fill_order
from evidential.jointree.tree import Hyperedge, JoinTree, TreeNode

logger = get_logger(__name__)


def build_join_tree(family: Sequence[Hyperedge], root_scope: Scope) -> JoinTree:
    """Embed the hypergraph of ``family`` in a join tree.

    Cliques come from a min-fill elimination order; each clique hangs below
    the clique of its earliest eliminated neighbour, and cliques contained in
    a neighbour are merged into it. Every input is attached to the first node
    containing its scope.
    """
    if not family:
        raise InvalidModelError("cannot build a join tree from an empty family")
    scope = family[0].scope
    for hyperedge in family[1:]:
        scope = scope.union(hyperedge.scope)
    if not root_scope.issubset(scope):
        raise InvalidModelError(f"root scope {root_scope} is not covered by the family")
    family = list(family) + [Hyperedge.filler(root_scope)]

    interaction = nx.Graph()
    interaction.add_nodes_from(scope.names)
    for hyperedge in family:
        interaction.add_edges_from(combinations(hyperedge.scope.names, 2))

    eliminated = min_fill_order(interaction)
    position = {name: i for i, (name, _) in enumerate(eliminated)}
    cliques = [clique for _, clique in eliminated]
    for clique in cliques:
        scope.restrict(clique).check_capacity()

    tree = nx.Graph()
    tree.add_nodes_from(range(len(cliques)))
    last = len(cliques) - 1
    for i, (name, clique) in enumerate(eliminated):
        separator = clique - {name}
        if separator:
            tree.add_edge(i, min(position[n] for n in separator))
        elif i != last:
            tree.add_edge(i, last)

    merged = True
    while merged:
        merged = False
        for a, b in sorted(tree.edges):
            small, large = (a, b) if cliques[a] <= cliques[b] else (b, a)
            if cliques[small] <= cliques[large]:
                tree = nx.contracted_nodes(tree, large, small, self_loops=False)
                merged = True
                break

    kept = sorted(tree.nodes)
    index = {old: new for new, old in enumerate(kept)}
    scopes = [scope.restrict(cliques[old]) for old in kept]
    members: Dict[int, List] = {i: [] for i in range(len(kept))}
    for hyperedge in family:
        home = next(i for i, s in enumerate(scopes) if hyperedge.scope.issubset(s))
        members[home].append(hyperedge.local)
    root = next(i for i, s in enumerate(scopes) if root_scope.issubset(s))

    join_tree = JoinTree(
        nodes=tuple(TreeNode(s, tuple(members[i])) for i, s in enumerate(scopes)),
        edges=tuple(sorted(tuple(sorted((index[a], index[b]))) for a, b in tree.edges)),
        root=root,
        elimination_order=tuple(name for name, _ in eliminated),
    )
    logger.debug(f"join tree with {len(kept)} node(s) rooted at {scopes[root]}")
    return join_tree
