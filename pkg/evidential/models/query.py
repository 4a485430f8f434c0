"""Syntax tree of logical expressions and IF-THEN rule queries."""

from dataclasses import dataclass
from typing import List, Mapping, Optional, Set, Tuple, Union


@dataclass(frozen=True)
class Atom:
    variable: str
    value: str

    def __str__(self) -> str:
        return f"{self.variable}='{self.value}'"


@dataclass(frozen=True)
class Not:
    operand: "Expression"

    def __str__(self) -> str:
        return f"NOT {_wrap(self.operand)}"


@dataclass(frozen=True)
class And:
    operands: Tuple["Expression", ...]

    def __str__(self) -> str:
        return " AND ".join(_wrap(op) for op in self.operands)


@dataclass(frozen=True)
class Or:
    operands: Tuple["Expression", ...]

    def __str__(self) -> str:
        return " OR ".join(_wrap(op) for op in self.operands)


Expression = Union[Atom, Not, And, Or]


@dataclass(frozen=True)
class RuleQuery:
    premise: Expression
    conclusion: Atom

    def __str__(self) -> str:
        return f"IF {self.premise} THEN {self.conclusion}"


QueryAst = Union[Expression, RuleQuery]


def _wrap(expr: "Expression") -> str:
    if isinstance(expr, (And, Or)):
        return f"({expr})"
    return str(expr)


def variables_of(expr: QueryAst) -> Set[str]:
    if isinstance(expr, Atom):
        return {expr.variable}
    if isinstance(expr, Not):
        return variables_of(expr.operand)
    if isinstance(expr, RuleQuery):
        return variables_of(expr.premise) | {expr.conclusion.variable}
    names: Set[str] = set()
    for operand in expr.operands:
        names |= variables_of(operand)
    return names


def evaluate(expr: QueryAst, assignment: Mapping[str, str]) -> bool:
    if isinstance(expr, Atom):
        return assignment[expr.variable] == expr.value
    if isinstance(expr, Not):
        return not evaluate(expr.operand, assignment)
    if isinstance(expr, And):
        return all(evaluate(op, assignment) for op in expr.operands)
    if isinstance(expr, Or):
        return any(evaluate(op, assignment) for op in expr.operands)
    return not evaluate(expr.premise, assignment) or evaluate(
        expr.conclusion, assignment
    )


def conjunction_atoms(expr: QueryAst) -> Optional[List[Atom]]:
    """The atoms of a pure conjunction of atoms, otherwise None"""
    if isinstance(expr, Atom):
        return [expr]
    if isinstance(expr, And):
        atoms: List[Atom] = []
        for operand in expr.operands:
            inner = conjunction_atoms(operand)
            if inner is None:
                return None
            atoms.extend(inner)
        return atoms
    return None
