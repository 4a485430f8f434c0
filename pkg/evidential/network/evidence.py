from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

from evidential.algebra.frames import FocalSet
from evidential.algebra.logical import logical_bpa
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError, TotalConflictError
from evidential.models.query import And, Atom, Expression, Or, variables_of
from evidential.network.belief_network import BeliefNetwork


@dataclass(frozen=True)
class EvidenceSet:
    """Current findings: restricted value sets per variable plus logical
    constraints over several variables."""

    assignments: Mapping[str, FrozenSet[str]] = field(default_factory=dict, hash=False)
    constraints: Tuple[Expression, ...] = ()

    def __post_init__(self):
        normalized: Dict[str, FrozenSet[str]] = {}
        for name, values in self.assignments.items():
            values = frozenset([values] if isinstance(values, str) else values)
            if not values:
                raise InvalidModelError(f"evidence on {name} allows no value")
            normalized[name] = values
        object.__setattr__(self, "assignments", dict(sorted(normalized.items())))
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @classmethod
    def of(
        cls,
        assignments: Optional[Mapping[str, Union[str, Iterable[str]]]] = None,
        constraints: Iterable[Expression] = (),
    ) -> "EvidenceSet":
        return cls(dict(assignments or {}), tuple(constraints))

    def is_empty(self) -> bool:
        return not self.assignments and not self.constraints

    def points(self) -> Dict[str, str]:
        """Variables clamped to a single value"""
        return {
            name: next(iter(values))
            for name, values in self.assignments.items()
            if len(values) == 1
        }

    def clamp(self, name: str, values: Union[str, Iterable[str]]) -> "EvidenceSet":
        values = frozenset([values] if isinstance(values, str) else values)
        if name in self.assignments:
            values = values & self.assignments[name]
            if not values:
                raise TotalConflictError(f"evidence on {name} contradicts itself")
        merged = dict(self.assignments)
        merged[name] = values
        return EvidenceSet(merged, self.constraints)

    def merge(self, other: "EvidenceSet") -> "EvidenceSet":
        result = EvidenceSet(dict(self.assignments), self.constraints + other.constraints)
        for name, values in other.assignments.items():
            result = result.clamp(name, values)
        return result

    def validate(self, net: BeliefNetwork) -> None:
        for name, values in self.assignments.items():
            variable = net.variable(name)
            for value in sorted(values):
                variable.index(value)
        for expr in self.constraints:
            for name in variables_of(expr):
                net.variable(name)

    def hyperedges(self, net: BeliefNetwork) -> List[MassFunction]:
        """Categorical mass functions entering the findings into propagation"""
        self.validate(net)
        edges = []
        for name, values in self.assignments.items():
            scope = net.scope_of([name])
            edges.append(
                MassFunction.categorical(scope, FocalSet.cylinder(scope, name, values))
            )
        for expr in self.constraints:
            edges.append(logical_bpa(net.scope_of(variables_of(expr)), expr))
        return edges

    def as_expression(self) -> Optional[Expression]:
        """The findings as one conjunction, or None when there are none"""
        terms: List[Expression] = []
        for name, values in self.assignments.items():
            atoms = tuple(Atom(name, value) for value in sorted(values))
            terms.append(atoms[0] if len(atoms) == 1 else Or(atoms))
        terms.extend(self.constraints)
        if not terms:
            return None
        return terms[0] if len(terms) == 1 else And(tuple(terms))

    def __str__(self) -> str:
        expr = self.as_expression()
        return "" if expr is None else str(expr)
