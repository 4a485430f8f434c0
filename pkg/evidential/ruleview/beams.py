"""Rule beams: a node valuation shown as an exhaustive list of IF-THEN rules.

Probabilistic beams carry one rule per table entry weighted by the
conditional probability. Ds beams carry one group of rules per focal set,
chained with ``AND IF``, weighted by the commonality of that set; equality in
a ds rule reads as "is containing".
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from evidential.algebra.frames import Scope, Variable, iter_bits
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError, ParseError
from evidential.network.belief_network import BeliefNetwork
from evidential.network.valuation import (
    NodeValuation,
    ValuationKind,
    parent_configurations,
)
from evidential.ruleview.grammar import parse_beam_header, parse_beam_line
from evidential.utils.formatting import format_real


@dataclass(frozen=True)
class RuleLine:
    premise: Tuple[Tuple[str, str], ...]
    conclusion: Tuple[str, str]

    def render(self) -> str:
        then = f"THEN {self.conclusion[0]}='{self.conclusion[1]}'"
        if not self.premise:
            return then
        atoms = " AND ".join(f"{name}='{value}'" for name, value in self.premise)
        return f"IF {atoms} {then}"


@dataclass(frozen=True)
class RuleGroup:
    lines: Tuple[RuleLine, ...]
    weight: float


@dataclass(frozen=True)
class RuleBeam:
    node: str
    parents: Tuple[str, ...]
    kind: ValuationKind
    groups: Tuple[RuleGroup, ...]

    @property
    def lines(self) -> List[RuleLine]:
        return [line for group in self.groups for line in group.lines]

    def to_text(self, digits: Optional[int] = None) -> str:
        """Canonical text; weights use ``repr`` unless ``digits`` is given"""
        out = [f"BEAM {self.node} {self.kind.value.upper()}"]
        for group in self.groups:
            weight = repr(float(group.weight)) if digits is None else format_real(
                group.weight, digits
            )
            for position, line in enumerate(group.lines):
                text = line.render() if position == 0 else f"AND {line.render()}"
                if position == len(group.lines) - 1:
                    text += f" WITH {weight}"
                out.append(text)
        return "\n".join(out) + "\n"


def render_rule_beam(net: BeliefNetwork, node: str) -> RuleBeam:
    valuation = net.valuation(node)
    variables = net.variable_map
    domain = variables[node].domain
    groups: List[RuleGroup] = []
    if valuation.kind is ValuationKind.PROBABILISTIC:
        for key in parent_configurations(valuation.parents, variables):
            premise = tuple(zip(valuation.parents, key))
            for value, p in zip(domain, valuation.table[key]):
                groups.append(RuleGroup((RuleLine(premise, (node, value)),), p))
    else:
        focals = valuation.focals
        scope = focals.scope
        for mask, _ in focals.focals:
            lines = []
            for index in iter_bits(mask):
                assignment = scope.configuration(index).as_dict()
                premise = tuple((p, assignment[p]) for p in valuation.parents)
                lines.append(RuleLine(premise, (node, assignment[node])))
            groups.append(RuleGroup(tuple(lines), focals.commonality(mask)))
    return RuleBeam(node, valuation.parents, valuation.kind, tuple(groups))


def _read_groups(text: str):
    header = None
    groups: List[Tuple[List, float]] = []
    current: List = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None and not groups and not current:
            header = parse_beam_header(line)
            if header is not None:
                continue
            header = False
        record = parse_beam_line(line, number)
        if record.continued and not current:
            raise ParseError("AND IF continuation without an open group", line=number)
        if not record.continued and current:
            raise ParseError("previous group has no WITH weight", line=number)
        current.append(record)
        if record.weight is not None:
            groups.append((current, record.weight))
            current = []
    if current:
        raise ParseError("last group has no WITH weight")
    if not groups:
        raise ParseError("rule beam contains no rules")
    return header or None, groups


def parse_rule_beam(
    text: str, variables: Union[Mapping[str, Variable], Sequence[Variable]]
) -> NodeValuation:
    """Read a beam back into a node valuation; ``variables`` supply domains"""
    if not isinstance(variables, Mapping):
        variables = {v.name: v for v in variables}
    header, groups = _read_groups(text)

    records = [record for group, _ in groups for record in group]
    nodes = {record.conclusion.variable for record in records}
    if len(nodes) != 1:
        raise InvalidModelError(f"rule beam concludes about several nodes {sorted(nodes)}")
    node = nodes.pop()
    if header is not None and header[0] != node:
        raise InvalidModelError(f"beam header names {header[0]} but rules conclude {node}")
    parents = tuple(sorted(atom.variable for atom in records[0].premise))
    for record in records:
        if tuple(sorted(atom.variable for atom in record.premise)) != parents:
            raise InvalidModelError("rules of one beam must mention the same parents")
    unknown = [n for n in (node, *parents) if n not in variables]
    if unknown:
        raise InvalidModelError(f"rule beam mentions unknown variable(s) {unknown}")

    if header is not None:
        kind = ValuationKind(header[1])
    else:
        kind = (
            ValuationKind.DS
            if any(len(group) > 1 for group, _ in groups)
            else ValuationKind.PROBABILISTIC
        )

    if kind is ValuationKind.PROBABILISTIC:
        valuation = _probabilistic(node, parents, groups, variables)
    else:
        valuation = _ds(node, parents, groups, variables)
    valuation.validate(variables)
    return valuation


def _probabilistic(node, parents, groups, variables) -> NodeValuation:
    domain = variables[node].domain
    rows: Dict[Tuple[str, ...], List[Optional[float]]] = {}
    for group, weight in groups:
        if len(group) != 1:
            raise InvalidModelError("probabilistic beams cannot chain rules with AND IF")
        record = group[0]
        assignment = {atom.variable: atom.value for atom in record.premise}
        key = tuple(assignment[p] for p in parents)
        for name, value in zip(parents, key):
            variables[name].index(value)
        row = rows.setdefault(key, [None] * len(domain))
        position = variables[node].index(record.conclusion.value)
        if row[position] is not None:
            raise InvalidModelError(
                f"rule for {node}='{record.conclusion.value}' given {key} listed twice"
            )
        row[position] = weight
    for key, row in rows.items():
        if any(p is None for p in row):
            missing = [v for v, p in zip(domain, row) if p is None]
            raise InvalidModelError(
                f"beam of {node}: configuration {key} lacks rules for {missing}"
            )
    missing_keys = [
        key for key in parent_configurations(parents, variables) if key not in rows
    ]
    if missing_keys:
        raise InvalidModelError(
            f"beam of {node}: parent configuration {missing_keys[0]} not covered"
        )
    return NodeValuation.probabilistic(node, parents, {k: tuple(r) for k, r in rows.items()})


def _ds(node, parents, groups, variables) -> NodeValuation:
    scope = Scope(tuple(variables[name] for name in (node, *parents)))
    scope.check_capacity()
    commonalities: Dict[int, float] = {}
    for group, weight in groups:
        mask = 0
        for record in group:
            assignment = {atom.variable: atom.value for atom in record.premise}
            assignment[node] = record.conclusion.value
            mask |= 1 << scope.index_of(assignment)
        if mask in commonalities:
            raise InvalidModelError(f"beam of {node} lists one focal set twice")
        commonalities[mask] = weight
    focals = MassFunction.from_focal_commonalities(scope, commonalities)
    return NodeValuation.ds(node, focals)
