from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

import networkx as nx

from evidential.algebra.frames import Scope
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError, PropagationError, ScopeMismatchError

Edge = Tuple[int, int]


class CombinationMode(str, Enum):
    SUM_PRODUCT = "sumProduct"
    MAX_PRODUCT = "maxProduct"


@dataclass(frozen=True)
class Hyperedge:
    """A scope with the knowledge attached to it."""

    scope: Scope
    local: MassFunction

    def __post_init__(self):
        if self.local.scope != self.scope:
            raise ScopeMismatchError(
                f"hyperedge over {self.scope} carries a valuation over {self.local.scope}"
            )

    @classmethod
    def of(cls, local: MassFunction) -> "Hyperedge":
        return cls(local.scope, local)

    @classmethod
    def filler(cls, scope: Scope) -> "Hyperedge":
        return cls(scope, MassFunction.vacuous(scope))


@dataclass(frozen=True)
class TreeNode:
    """A join-tree node: its scope and the input hyperedges attached to it.

    The local valuation depends on the combination mode, so the attached
    inputs are kept separately and combined on demand.
    """

    scope: Scope
    members: Tuple[MassFunction, ...] = ()


@dataclass(frozen=True)
class JoinTree:
    nodes: Tuple[TreeNode, ...]
    edges: Tuple[Edge, ...]
    root: int
    elimination_order: Tuple[str, ...] = ()
    mode: Optional[CombinationMode] = None
    mailboxes: Mapping[Edge, MassFunction] = field(default_factory=dict, hash=False)

    def __len__(self) -> int:
        return len(self.nodes)

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(len(self.nodes)))
        graph.add_edges_from(self.edges)
        return graph

    def neighbors(self, node: int) -> List[int]:
        return sorted(
            [b for a, b in self.edges if a == node] + [a for a, b in self.edges if b == node]
        )

    def separator(self, a: int, b: int) -> Scope:
        return self.nodes[a].scope.intersection(self.nodes[b].scope)

    def directed_edges(self) -> List[Edge]:
        return sorted([(a, b) for a, b in self.edges] + [(b, a) for a, b in self.edges])

    def parent_map(self) -> Dict[int, Optional[int]]:
        """Parent of every node when the tree hangs from its root"""
        return dict(self.breadth_first())

    def breadth_first(self) -> List[Tuple[int, Optional[int]]]:
        visited: List[Tuple[int, Optional[int]]] = [(self.root, None)]
        seen = {self.root}
        for node, _ in visited:
            for neighbor in self.neighbors(node):
                if neighbor not in seen:
                    seen.add(neighbor)
                    visited.append((neighbor, node))
        return visited

    def default_schedule(self) -> List[Edge]:
        """Collect toward the root, then distribute outward"""
        collect = [(n, p) for n, p in reversed(self.breadth_first()) if p is not None]
        distribute = [(p, c) for c, p in reversed(collect)]
        return collect + distribute

    def ready(self, filled: Iterable[Edge]) -> List[Edge]:
        """Unfilled messages whose inputs are all available"""
        done: Set[Edge] = set(filled)
        return [
            (a, b)
            for a, b in self.directed_edges()
            if (a, b) not in done
            and all((k, a) in done for k in self.neighbors(a) if k != b)
        ]

    def message(self, source: int, target: int) -> MassFunction:
        try:
            return self.mailboxes[(source, target)]
        except KeyError:
            raise PropagationError(
                f"mailbox {source}->{target} is empty; propagate first"
            ) from None

    def check(self) -> None:
        """Raise unless the edges form a spanning tree with running intersection"""
        graph = self.graph()
        if not nx.is_tree(graph):
            raise InvalidModelError("join-tree edges do not form a spanning tree")
        names = {name for node in self.nodes for name in node.scope.names}
        for name in sorted(names):
            holders = [i for i, node in enumerate(self.nodes) if name in node.scope]
            if not nx.is_connected(graph.subgraph(holders)):
                raise InvalidModelError(
                    f"running intersection violated for variable {name}"
                )

    def dump(self) -> str:
        lines = [f"elimination order: {' '.join(self.elimination_order)}"]
        for index, node in enumerate(self.nodes):
            marker = " (root)" if index == self.root else ""
            lines.append(
                f"node {index}: {node.scope} with {len(node.members)} input(s){marker}"
            )
        for a, b in self.edges:
            lines.append(f"edge {a}-{b}: separator {self.separator(a, b)}")
        return "\n".join(lines)
