"""Logical belief functions: categorical or simple support on the set of
configurations satisfying an expression."""

import numpy as np

from evidential.algebra.frames import Scope, mask_from_bools, render_set
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError
from evidential.models.query import And, Atom, Not, Or, QueryAst, RuleQuery


def _flags(scope: Scope, expr: QueryAst, digits: np.ndarray) -> np.ndarray:
    if isinstance(expr, Atom):
        variable = scope.variable(expr.variable)
        position = scope.names.index(expr.variable)
        return digits[:, position] == variable.index(expr.value)
    if isinstance(expr, Not):
        return ~_flags(scope, expr.operand, digits)
    if isinstance(expr, And):
        return np.logical_and.reduce([_flags(scope, op, digits) for op in expr.operands])
    if isinstance(expr, Or):
        return np.logical_or.reduce([_flags(scope, op, digits) for op in expr.operands])
    if isinstance(expr, RuleQuery):
        # material implication
        return ~_flags(scope, expr.premise, digits) | _flags(
            scope, expr.conclusion, digits
        )
    raise InvalidModelError(f"unsupported expression {expr!r}")


def satisfying_mask(scope: Scope, expr: QueryAst) -> int:
    """Bitset of the configurations of ``scope`` that satisfy ``expr``"""
    scope.check_capacity()
    return mask_from_bools(_flags(scope, expr, scope.digits()))


def logical_bpa(scope: Scope, expr: QueryAst, alpha: float = 1.0) -> MassFunction:
    mask = satisfying_mask(scope, expr)
    if mask == 0:
        raise InvalidModelError(f"expression {expr} is unsatisfiable over {scope}")
    return MassFunction.simple_support(scope, mask, alpha)


def describe(scope: Scope, expr: QueryAst) -> str:
    return render_set(scope, satisfying_mask(scope, expr))
