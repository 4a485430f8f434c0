from typing import Iterable, List, Set, Tuple

import networkx as nx

from evidential.core.exceptions import CycleError, InvalidModelError


class Dag:
    """Immutable directed acyclic graph over variable names."""

    def __init__(self, nodes: Iterable[str], edges: Iterable[Tuple[str, str]] = ()):
        nodes = list(nodes)
        if len(set(nodes)) != len(nodes):
            raise InvalidModelError(f"duplicate node in {sorted(nodes)}")
        graph = nx.DiGraph()
        graph.add_nodes_from(nodes)
        for edge in edges:
            parent, child = edge
            if parent not in graph or child not in graph:
                raise InvalidModelError(
                    f"edge {parent}->{child} references an undeclared node"
                )
            if graph.has_edge(parent, child):
                raise InvalidModelError(f"duplicate edge {parent}->{child}")
            if parent == child:
                raise CycleError(f"cycle detected: {parent} -> {parent}")
            graph.add_edge(parent, child)
        if not nx.is_directed_acyclic_graph(graph):
            cycle = nx.find_cycle(graph)
            path = " -> ".join([u for u, _ in cycle] + [cycle[0][0]])
            raise CycleError(f"cycle detected: {path}")
        self._graph = nx.freeze(graph)

    @property
    def graph(self) -> nx.DiGraph:
        return self._graph

    @property
    def nodes(self) -> Tuple[str, ...]:
        return tuple(sorted(self._graph.nodes))

    @property
    def edges(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(sorted(self._graph.edges))

    def __contains__(self, node: object) -> bool:
        return node in self._graph

    def __len__(self) -> int:
        return self._graph.number_of_nodes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.nodes == other.nodes and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges))

    def __repr__(self) -> str:
        arrows = ", ".join(f"{p}->{c}" for p, c in self.edges)
        return f"Dag(nodes={list(self.nodes)}, edges=[{arrows}])"

    def require(self, *nodes: str) -> None:
        unknown = sorted(n for n in nodes if n not in self._graph)
        if unknown:
            raise InvalidModelError(f"unknown node(s) {unknown}")

    def parents(self, node: str) -> Tuple[str, ...]:
        self.require(node)
        return tuple(sorted(self._graph.predecessors(node)))

    def children(self, node: str) -> Tuple[str, ...]:
        self.require(node)
        return tuple(sorted(self._graph.successors(node)))

    def ancestors(self, nodes: Iterable[str]) -> Set[str]:
        result: Set[str] = set()
        for node in nodes:
            self.require(node)
            result |= nx.ancestors(self._graph, node)
        return result

    def descendants(self, node: str) -> Set[str]:
        self.require(node)
        return nx.descendants(self._graph, node)

    def topological_order(self) -> List[str]:
        """Topological order with ties broken by node name"""
        return list(nx.lexicographical_topological_sort(self._graph))

    def with_node(self, node: str, parents: Iterable[str]) -> "Dag":
        parents = list(parents)
        return Dag(
            list(self._graph.nodes) + [node],
            list(self._graph.edges) + [(p, node) for p in parents],
        )

    def without_node(self, node: str) -> "Dag":
        self.require(node)
        return Dag(
            [n for n in self._graph.nodes if n != node],
            [(p, c) for p, c in self._graph.edges if node not in (p, c)],
        )
