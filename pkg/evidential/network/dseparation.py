from collections import deque
from typing import Iterable, Set

from evidential.core.exceptions import InvalidModelError
from evidential.network.dag import Dag


def d_separated(
    dag: Dag, J: Iterable[str], K: Iterable[str], L: Iterable[str]
) -> bool:
    """True iff no trail active given ``L`` connects ``J`` and ``K``.

    Reachability in the style of the Bayes-ball algorithm: a visit is a node
    plus the direction it was entered from ("up" when arriving from a child,
    "down" when arriving from a parent).
    """
    J, K, L = set(J), set(K), set(L)
    dag.require(*J, *K, *L)
    if J & K or J & L or K & L:
        raise InvalidModelError("node sets for d-separation must be disjoint")
    if not J or not K:
        return True

    observed_or_ancestor: Set[str] = L | dag.ancestors(L)
    visited = set()
    queue = deque((node, "up") for node in sorted(J))
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node in K:
            return False
        if direction == "up" and node not in L:
            queue.extend((parent, "up") for parent in dag.parents(node))
            queue.extend((child, "down") for child in dag.children(node))
        elif direction == "down":
            if node not in L:
                queue.extend((child, "down") for child in dag.children(node))
            if node in observed_or_ancestor:
                queue.extend((parent, "up") for parent in dag.parents(node))
    return True
