import itertools
from dataclasses import dataclass, field
from enum import Enum
from math import fsum, isfinite
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from evidential.algebra.frames import Scope, Variable
from evidential.algebra.mass import MassFunction
from evidential.config.config import settings
from evidential.core.exceptions import InvalidModelError, ScopeMismatchError
from evidential.core.logging_config import get_logger

logger = get_logger(__name__)

ParentKey = Tuple[str, ...]


class ValuationKind(str, Enum):
    PROBABILISTIC = "probabilistic"
    DS = "ds"


def parent_configurations(
    parents: Sequence[str], variables: Mapping[str, Variable]
) -> List[ParentKey]:
    """Parent configurations in lexicographic order of domain index"""
    return list(itertools.product(*(variables[p].domain for p in parents)))


@dataclass(frozen=True)
class NodeValuation:
    """Knowledge stored at one node of a belief network.

    Probabilistic valuations keep a conditional table keyed by the parent
    values (parents in name order), each row a distribution in the order of
    the node's domain. Ds valuations keep a mass function over the node and
    its parents.
    """

    node: str
    parents: Tuple[str, ...]
    kind: ValuationKind
    table: Optional[Dict[ParentKey, Tuple[float, ...]]] = field(
        default=None, hash=False
    )
    focals: Optional[MassFunction] = None

    @classmethod
    def probabilistic(
        cls,
        node: str,
        parents: Sequence[str],
        table: Mapping[object, Sequence[float]],
    ) -> "NodeValuation":
        given = tuple(parents)
        ordered = tuple(sorted(given))
        permutation = [given.index(p) for p in ordered]
        rows: Dict[ParentKey, Tuple[float, ...]] = {}
        for key, row in table.items():
            key = (key,) if isinstance(key, str) else tuple(key)
            if len(key) != len(given):
                raise InvalidModelError(
                    f"valuation of {node}: row key {key} does not match parents {list(given)}"
                )
            canonical = tuple(key[i] for i in permutation)
            if canonical in rows:
                raise InvalidModelError(
                    f"valuation of {node}: parent configuration {canonical} listed twice"
                )
            rows[canonical] = tuple(float(p) for p in row)
        return cls(node, ordered, ValuationKind.PROBABILISTIC, table=rows)

    @classmethod
    def ds(cls, node: str, focals: MassFunction) -> "NodeValuation":
        if node not in focals.scope:
            raise ScopeMismatchError(f"valuation of {node} does not mention {node}")
        parents = tuple(n for n in focals.scope.names if n != node)
        return cls(node, parents, ValuationKind.DS, focals=focals)

    @classmethod
    def from_mass(
        cls,
        node: str,
        m: MassFunction,
        variables: Mapping[str, Variable],
    ) -> "NodeValuation":
        """Inverse of lowering: singleton focals become a conditional table.

        Rows of a normalized input are rescaled to sum to one; parent
        configurations without any mass become uniform.
        """
        if not m.is_bayesian:
            return cls.ds(node, m.normalize())
        scope = m.scope
        parents = tuple(n for n in scope.names if n != node)
        domain = variables[node].domain
        rows: Dict[ParentKey, List[float]] = {}
        for mask, value in m.focals:
            assignment = scope.configuration(mask.bit_length() - 1).as_dict()
            key = tuple(assignment[p] for p in parents)
            row = rows.setdefault(key, [0.0] * len(domain))
            row[domain.index(assignment[node])] += value
        table: Dict[ParentKey, Tuple[float, ...]] = {}
        for key in parent_configurations(parents, variables):
            row = rows.get(key)
            total = fsum(row) if row is not None else 0.0
            if row is None or total <= settings.PRUNE_THRESHOLD:
                logger.warning(
                    f"valuation of {node}: parent configuration {key} has no mass; "
                    "using the uniform distribution"
                )
                table[key] = tuple(1.0 / len(domain) for _ in domain)
            elif m.normalized:
                table[key] = tuple(p / total for p in row)
            else:
                table[key] = tuple(row)
        return cls(node, parents, ValuationKind.PROBABILISTIC, table=table)

    def family_scope(self, variables: Mapping[str, Variable]) -> Scope:
        return Scope(tuple(variables[name] for name in (self.node, *self.parents)))

    def validate(self, variables: Mapping[str, Variable]) -> None:
        unknown = [n for n in (self.node, *self.parents) if n not in variables]
        if unknown:
            raise InvalidModelError(f"valuation of {self.node}: unknown variable(s) {unknown}")
        if self.kind is ValuationKind.DS:
            if self.focals is None:
                raise InvalidModelError(f"valuation of {self.node} has no focal sets")
            if self.focals.scope != self.family_scope(variables):
                raise ScopeMismatchError(
                    f"valuation of {self.node} is over {self.focals.scope}, "
                    f"expected {self.family_scope(variables)}"
                )
            return
        if self.table is None:
            raise InvalidModelError(f"valuation of {self.node} has no table")
        domain = variables[self.node].domain
        expected = parent_configurations(self.parents, variables)
        missing = [key for key in expected if key not in self.table]
        if missing:
            raise InvalidModelError(
                f"valuation of {self.node}: parent configuration {missing[0]} missing"
            )
        extra = set(self.table) - set(expected)
        if extra:
            raise InvalidModelError(
                f"valuation of {self.node}: unknown parent configuration {sorted(extra)[0]}"
            )
        for key in expected:
            row = self.table[key]
            if len(row) != len(domain):
                raise InvalidModelError(
                    f"valuation of {self.node}: row {key} has {len(row)} entries, "
                    f"expected {len(domain)}"
                )
            if not all(isfinite(p) for p in row):
                raise InvalidModelError(
                    f"valuation of {self.node}: row {key} has a non-finite entry"
                )
            if any(p < 0 for p in row):
                raise InvalidModelError(
                    f"valuation of {self.node}: row {key} has a negative entry"
                )
            total = fsum(row)
            if not abs(total - 1.0) <= settings.TOLERANCE:
                raise InvalidModelError(
                    f"valuation of {self.node}: row {key} sums to {total:.12g}"
                )

    def cpt_array(self, variables: Mapping[str, Variable]) -> np.ndarray:
        """Conditional table as an array, one row per parent configuration"""
        if self.table is None:
            raise InvalidModelError(f"valuation of {self.node} is not probabilistic")
        return np.array(
            [self.table[key] for key in parent_configurations(self.parents, variables)],
            dtype=float,
        )

    def to_mass(self, variables: Mapping[str, Variable]) -> MassFunction:
        """Lower to a valuation over the family scope.

        A conditional table becomes an unnormalized potential with one
        singleton focal per table entry.
        """
        if self.kind is ValuationKind.DS:
            return self.focals
        scope = self.family_scope(variables)
        domain = variables[self.node].domain
        entries = []
        for key, row in self.table.items():
            assignment = dict(zip(self.parents, key))
            for value, p in zip(domain, row):
                if p > 0:
                    assignment[self.node] = value
                    entries.append((1 << scope.index_of(assignment), p))
        return MassFunction.potential(scope, entries)
