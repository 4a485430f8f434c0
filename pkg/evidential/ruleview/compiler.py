"""Compile logical queries into fresh deterministic nodes of a network.

Every AND/OR subexpression becomes a gate node with domain {t, n}; negation
is absorbed by complementing the set of accepted parent values. A rule query
becomes a node over {t, n, ?}: ``?`` when the premise does not hold, else
``t``/``n`` according to the conclusion. Gate valuations are 0/1 conditional
tables in probabilistic networks and categorical relations in ds networks.
"""

import itertools
from typing import Callable, Dict, FrozenSet, List, Mapping, Sequence, Set, Tuple

from evidential.algebra.frames import Scope, Variable
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError
from evidential.core.logging_config import get_logger
from evidential.models.query import And, Atom, Expression, Not, Or, QueryAst, RuleQuery
from evidential.network.belief_network import BeliefNetwork
from evidential.network.valuation import NodeValuation, ValuationKind

logger = get_logger(__name__)

GATE_DOMAIN = ("t", "n")
RULE_DOMAIN = ("t", "n", "?")
TRUE = frozenset(["t"])

Literal = Tuple[str, FrozenSet[str]]


class QueryCompiler:
    """Accumulates gate nodes for one network; ``amended`` builds the result"""

    def __init__(self, net: BeliefNetwork):
        self.net = net
        self._variables: Dict[str, Variable] = dict(net.variable_map)
        self._counter = 0
        self.gates: Set[str] = set()
        self.added_variables: List[Variable] = []
        self.added_valuations: List[NodeValuation] = []

    def fresh_name(self) -> str:
        while True:
            self._counter += 1
            name = f"x{self._counter}"
            if name not in self._variables:
                return name

    def literal(self, expr: Expression) -> Literal:
        """A node name and the values of it that make ``expr`` true"""
        if isinstance(expr, Atom):
            variable = self._variable(expr.variable)
            variable.index(expr.value)
            return expr.variable, frozenset([expr.value])
        if isinstance(expr, Not):
            source, accepted = self.literal(expr.operand)
            return source, frozenset(self._variables[source].domain) - accepted
        if isinstance(expr, And):
            return self._gate([self.literal(op) for op in expr.operands], all), TRUE
        if isinstance(expr, Or):
            return self._gate([self.literal(op) for op in expr.operands], any), TRUE
        raise InvalidModelError(f"a rule cannot be nested inside an expression: {expr}")

    def expression_node(self, expr: Expression) -> str:
        """Name of a node whose value ``t`` is exactly the event ``expr``"""
        source, accepted = self.literal(expr)
        if source in self.gates and accepted == TRUE:
            return source
        return self._gate([(source, accepted)], all)

    def rule_node(self, rule: RuleQuery) -> str:
        premise, premise_values = self.literal(rule.premise)
        conclusion, conclusion_values = self.literal(rule.conclusion)

        def outcome(assignment: Mapping[str, str]) -> str:
            if assignment[premise] not in premise_values:
                return "?"
            return "t" if assignment[conclusion] in conclusion_values else "n"

        return self._deterministic(RULE_DOMAIN, {premise, conclusion}, outcome)

    def amended(self) -> BeliefNetwork:
        if not self.added_variables:
            return self.net
        return self.net.with_nodes(self.added_variables, self.added_valuations)

    def _variable(self, name: str) -> Variable:
        try:
            return self._variables[name]
        except KeyError:
            raise InvalidModelError(f"unknown variable '{name}'") from None

    def _gate(
        self, children: Sequence[Literal], combine: Callable[[object], bool]
    ) -> str:
        def outcome(assignment: Mapping[str, str]) -> str:
            hit = combine(assignment[source] in accepted for source, accepted in children)
            return "t" if hit else "n"

        name = self._deterministic(GATE_DOMAIN, {source for source, _ in children}, outcome)
        self.gates.add(name)
        return name

    def _deterministic(
        self,
        domain: Tuple[str, ...],
        parent_names: Set[str],
        outcome: Callable[[Mapping[str, str]], str],
    ) -> str:
        name = self.fresh_name()
        variable = Variable(name, domain)
        parents = tuple(sorted(parent_names))
        scope = Scope(tuple(self._variables[p] for p in parents) + (variable,))
        scope.check_capacity()
        keys = itertools.product(*(self._variables[p].domain for p in parents))

        if self.net.mode is ValuationKind.PROBABILISTIC:
            table = {}
            for key in keys:
                value = outcome(dict(zip(parents, key)))
                table[key] = tuple(1.0 if v == value else 0.0 for v in domain)
            valuation = NodeValuation.probabilistic(name, parents, table)
        else:
            mask = 0
            for key in keys:
                assignment = dict(zip(parents, key))
                assignment[name] = outcome(assignment)
                mask |= 1 << scope.index_of(assignment)
            valuation = NodeValuation.ds(name, MassFunction.categorical(scope, mask))

        self._variables[name] = variable
        self.added_variables.append(variable)
        self.added_valuations.append(valuation)
        logger.debug(f"compiled node {name} over parents {list(parents)}")
        return name


def compile_query_node(net: BeliefNetwork, ast: QueryAst) -> Tuple[BeliefNetwork, str]:
    """Amend ``net`` with the nodes of ``ast``; returns the network and the
    name of the node representing the whole query"""
    compiler = QueryCompiler(net)
    if isinstance(ast, RuleQuery):
        name = compiler.rule_node(ast)
    else:
        name = compiler.expression_node(ast)
    return compiler.amended(), name
