from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Sequence, Tuple, Union

from evidential.algebra.frames import Scope, Variable
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError
from evidential.core.logging_config import get_logger
from evidential.network.dag import Dag
from evidential.network.valuation import NodeValuation, ValuationKind

logger = get_logger(__name__)


@dataclass(frozen=True)
class BeliefNetwork:
    """A dag with one valuation per node; combined they give the underlying
    distribution. Build instances with ``build_network``."""

    variables: Tuple[Variable, ...]
    dag: Dag
    valuations: Tuple[NodeValuation, ...]

    @property
    def mode(self) -> ValuationKind:
        if all(v.kind is ValuationKind.PROBABILISTIC for v in self.valuations):
            return ValuationKind.PROBABILISTIC
        return ValuationKind.DS

    @cached_property
    def variable_map(self) -> Dict[str, Variable]:
        return {v.name: v for v in self.variables}

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @cached_property
    def scope(self) -> Scope:
        return Scope(self.variables)

    def variable(self, name: str) -> Variable:
        try:
            return self.variable_map[name]
        except KeyError:
            raise InvalidModelError(f"unknown variable '{name}'") from None

    def valuation(self, node: str) -> NodeValuation:
        for valuation in self.valuations:
            if valuation.node == node:
                return valuation
        raise InvalidModelError(f"unknown node '{node}'")

    def scope_of(self, names: Iterable[str]) -> Scope:
        return Scope(tuple(self.variable(name) for name in set(names)))

    def family_scope(self, node: str) -> Scope:
        return self.valuation(node).family_scope(self.variable_map)

    @cached_property
    def lowered(self) -> Tuple[MassFunction, ...]:
        """Every valuation as a mass function over its family scope"""
        return tuple(v.to_mass(self.variable_map) for v in self.valuations)

    def with_nodes(
        self, variables: Sequence[Variable], valuations: Sequence[NodeValuation]
    ) -> "BeliefNetwork":
        """A new network amended by extra nodes; ``self`` is left untouched"""
        dag = self.dag
        for valuation in valuations:
            dag = dag.with_node(valuation.node, valuation.parents)
        return build_network(
            list(self.variables) + list(variables),
            dag,
            list(self.valuations) + list(valuations),
        )


def build_network(
    variables: Sequence[Variable],
    dag: Union[Dag, Iterable[Tuple[str, str]]],
    valuations: Sequence[NodeValuation],
) -> BeliefNetwork:
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise InvalidModelError(f"duplicate variable in {sorted(names)}")
    if not isinstance(dag, Dag):
        dag = Dag(names, dag)
    if set(dag.nodes) != set(names):
        raise InvalidModelError(
            f"dag nodes {sorted(dag.nodes)} differ from variables {sorted(names)}"
        )
    variable_map = {v.name: v for v in variables}

    by_node: Dict[str, NodeValuation] = {}
    for valuation in valuations:
        if valuation.node in by_node:
            raise InvalidModelError(f"node {valuation.node} has two valuations")
        if valuation.node not in variable_map:
            raise InvalidModelError(f"valuation for unknown node '{valuation.node}'")
        by_node[valuation.node] = valuation
    missing = sorted(set(names) - set(by_node))
    if missing:
        raise InvalidModelError(f"missing valuation for node(s) {missing}")

    for node, valuation in by_node.items():
        unknown = [p for p in valuation.parents if p not in variable_map]
        if unknown:
            raise InvalidModelError(f"valuation of {node}: unknown parent(s) {unknown}")
        if tuple(sorted(valuation.parents)) != dag.parents(node):
            raise InvalidModelError(
                f"valuation of {node} lists parents {list(valuation.parents)} "
                f"but the dag has {list(dag.parents(node))}"
            )
        valuation.validate(variable_map)

    network = BeliefNetwork(
        tuple(sorted(variables, key=lambda v: v.name)),
        dag,
        tuple(by_node[name] for name in sorted(by_node)),
    )
    logger.debug(
        f"built {network.mode.value} network with {len(names)} nodes "
        f"and {len(dag.edges)} edges"
    )
    return network


def remove_leaf(net: BeliefNetwork, node: str) -> BeliefNetwork:
    """Drop a childless node together with its valuation.

    The result represents the marginal of the original distribution on the
    remaining variables, provided the leaf's valuation says nothing about its
    parents (always true for conditional tables).
    """
    if net.dag.children(node):
        raise InvalidModelError(f"node {node} has children and is not a leaf")
    valuation = net.valuation(node)
    if valuation.kind is ValuationKind.DS and valuation.parents:
        on_parents = valuation.focals.marginalize(net.scope_of(valuation.parents))
        if not on_parents.allclose(MassFunction.vacuous(on_parents.scope)):
            raise InvalidModelError(
                f"valuation of {node} constrains its parents; removing it would "
                "change the distribution"
            )
    return build_network(
        [v for v in net.variables if v.name != node],
        net.dag.without_node(node),
        [v for v in net.valuations if v.node != node],
    )
