"""Scoped basic probability assignments and the operations of the algebra.

Focal sets are bitsets over the enumerated frame of the scope (see
``frames``). A ``MassFunction`` is immutable; every operation returns a new
value.
"""

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from math import fsum, isfinite
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from evidential.algebra.frames import (
    FocalSet,
    Scope,
    extend_mask,
    iter_bits,
    project_mask,
    render_set,
)
from evidential.config.config import settings
from evidential.core.exceptions import (
    CapacityError,
    DecombinationError,
    InvalidModelError,
    ScopeMismatchError,
    TotalConflictError,
)
from evidential.core.logging_config import get_logger
from evidential.utils.formatting import format_real

logger = get_logger(__name__)

SetLike = Union[FocalSet, int]
Entry = Tuple[SetLike, float]


class SetFunctionKind(str, Enum):
    BELIEF = "belief"
    PLAUSIBILITY = "plausibility"
    COMMONALITY = "commonality"


def _as_mask(scope: Scope, subset: SetLike) -> int:
    if isinstance(subset, FocalSet):
        if subset.scope != scope:
            raise ScopeMismatchError(
                f"set over {subset.scope} used with mass function over {scope}"
            )
        return subset.mask
    if subset < 0 or subset > scope.full_mask:
        raise InvalidModelError(f"bitset does not fit the frame of {scope}")
    return subset


def _merge(scope: Scope, entries: Iterable[Entry]) -> Dict[int, float]:
    merged: Dict[int, float] = defaultdict(float)
    count = 0
    for subset, value in entries:
        value = float(value)
        if not isfinite(value):
            raise InvalidModelError(f"mass {value!r} is not a finite number")
        merged[_as_mask(scope, subset)] += value
        count += 1
    if count == 0:
        raise InvalidModelError("a mass function needs at least one focal set")
    return dict(merged)


def _canonical(values: Mapping[int, float]) -> Tuple[Tuple[int, float], ...]:
    return tuple(
        sorted((a, v) for a, v in values.items() if abs(v) > settings.PRUNE_THRESHOLD)
    )


def _submasks(mask: int) -> Iterable[int]:
    if mask.bit_count() > settings.DENSE_FRAME_LIMIT:
        raise CapacityError(
            f"focal set with {mask.bit_count()} members is too large to enumerate"
        )
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def _down_closure(masks: Iterable[int]) -> set:
    closure: set = set()
    for mask in masks:
        if mask and mask not in closure:
            closure.update(_submasks(mask))
    return closure


def _invert_commonality(
    q: Mapping[int, float], family: Iterable[int]
) -> List[Tuple[int, float]]:
    """Möbius inversion of a commonality table restricted to ``family``.

    ``family`` must contain every focal set of the result; processing by
    decreasing cardinality means every strict superset is already resolved.
    """
    resolved: List[Tuple[int, float]] = []
    for a in sorted(family, key=lambda m: (-m.bit_count(), m)):
        value = q.get(a, 0.0) - fsum(
            mb for b, mb in resolved if b != a and b & a == a
        )
        if abs(value) > settings.PRUNE_THRESHOLD:
            resolved.append((a, value))
    return resolved


@dataclass(frozen=True)
class MassFunction:
    """A basic probability assignment over ``scope``.

    ``focals`` holds ``(bitset, mass)`` pairs sorted by bitset. ``pseudo``
    marks pseudo-belief functions, which may carry negative masses.
    ``normalized`` is false for potentials: lowered conditional tables and
    max-product scores, whose masses need not sum to one.
    """

    scope: Scope
    focals: Tuple[Tuple[int, float], ...]
    pseudo: bool = False
    normalized: bool = True

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_focals(
        cls, scope: Scope, entries: Iterable[Entry], normalize: bool = False
    ) -> "MassFunction":
        merged = _merge(scope, entries)
        if normalize:
            return cls.potential(scope, merged.items()).normalize()
        if abs(merged.get(0, 0.0)) > settings.PRUNE_THRESHOLD:
            raise InvalidModelError(
                "the empty set carries mass; request normalization explicitly"
            )
        merged.pop(0, None)
        total = fsum(merged.values())
        if not abs(total - 1.0) <= settings.TOLERANCE:
            raise InvalidModelError(f"masses sum to {total!r}, expected 1")
        focals = _canonical(merged)
        if not focals:
            raise InvalidModelError("a mass function needs at least one focal set")
        result = cls(scope, focals, pseudo=any(v < 0 for _, v in focals))
        if result.pseudo:
            result.check_pseudo()
        return result

    @classmethod
    def potential(cls, scope: Scope, entries: Iterable[Entry]) -> "MassFunction":
        """Unnormalized valuation; the empty set may carry mass"""
        focals = _canonical(_merge(scope, entries))
        return cls(
            scope,
            focals,
            pseudo=any(v < 0 for _, v in focals),
            normalized=False,
        )

    @classmethod
    def vacuous(cls, scope: Scope) -> "MassFunction":
        return cls(scope, ((scope.full_mask, 1.0),))

    @classmethod
    def categorical(cls, scope: Scope, subset: SetLike) -> "MassFunction":
        mask = _as_mask(scope, subset)
        if mask == 0:
            raise InvalidModelError("a categorical mass function needs a nonempty set")
        return cls(scope, ((mask, 1.0),))

    @classmethod
    def simple_support(
        cls, scope: Scope, subset: SetLike, alpha: float
    ) -> "MassFunction":
        mask = _as_mask(scope, subset)
        if mask == 0:
            raise InvalidModelError("a simple support function needs a nonempty set")
        if not 0.0 < alpha <= 1.0:
            raise InvalidModelError(f"support {alpha} outside (0, 1]")
        if alpha == 1.0 or mask == scope.full_mask:
            return cls.categorical(scope, mask)
        return cls(scope, tuple(sorted([(mask, alpha), (scope.full_mask, 1.0 - alpha)])))

    @classmethod
    def from_commonality(
        cls, scope: Scope, q: Mapping[SetLike, float]
    ) -> "MassFunction":
        """Recover masses from a commonality table.

        The table must be given on a family closed under nonempty subsets,
        for instance a dense table over every subset of the frame.
        """
        table = {_as_mask(scope, a): float(v) for a, v in q.items()}
        negative = [a for a, v in table.items() if v < -settings.PSEUDO_TOLERANCE]
        if negative:
            raise InvalidModelError(
                f"commonality of {render_set(scope, negative[0])} is negative; "
                "not a pseudo-belief function"
            )
        table.pop(0, None)
        family = _down_closure(a for a, v in table.items() if v != 0.0)
        missing = family.difference(table)
        if missing:
            raise InvalidModelError("commonality table is not closed under subsets")
        resolved = _invert_commonality(table, family)
        return cls._from_resolved(scope, resolved, InvalidModelError)

    @classmethod
    def from_focal_commonalities(
        cls, scope: Scope, q: Mapping[SetLike, float]
    ) -> "MassFunction":
        """Recover masses from commonalities known only on the focal sets"""
        table = {_as_mask(scope, a): float(v) for a, v in q.items()}
        if 0 in table:
            raise InvalidModelError("the empty set cannot be a focal set")
        resolved = _invert_commonality(table, table)
        return cls.from_focals(scope, resolved)

    @classmethod
    def _from_resolved(
        cls, scope: Scope, resolved: List[Tuple[int, float]], error: type
    ) -> "MassFunction":
        if not resolved:
            return cls.vacuous(scope)
        total = fsum(v for _, v in resolved)
        if total <= settings.TOLERANCE:
            raise error("recovered masses do not have a positive total")
        focals = _canonical({a: v / total for a, v in resolved})
        if not focals:
            return cls.vacuous(scope)
        return cls(scope, focals, pseudo=any(v < 0 for _, v in focals))

    # -- inspection -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.focals)

    def __str__(self) -> str:
        return self.render()

    @property
    def total(self) -> float:
        return fsum(v for _, v in self.focals)

    @property
    def is_bayesian(self) -> bool:
        return all(a.bit_count() == 1 for a, _ in self.focals)

    def masses(self) -> Dict[int, float]:
        return dict(self.focals)

    def mass(self, subset: SetLike) -> float:
        return self.masses().get(_as_mask(self.scope, subset), 0.0)

    def focal_sets(self) -> List[FocalSet]:
        return [FocalSet(self.scope, a) for a, _ in self.focals]

    def render(self, digits: Optional[int] = None) -> str:
        return "\n".join(
            f"{render_set(self.scope, a)}: {format_real(v, digits)}"
            for a, v in self.focals
        )

    def allclose(self, other: "MassFunction", tol: Optional[float] = None) -> bool:
        tol = settings.TOLERANCE if tol is None else tol
        if other.scope != self.scope:
            return False
        mine, theirs = self.masses(), other.masses()
        return all(
            abs(mine.get(a, 0.0) - theirs.get(a, 0.0)) <= tol
            for a in set(mine) | set(theirs)
        )

    # -- set functions -------------------------------------------------------

    def belief(self, subset: SetLike) -> float:
        a = _as_mask(self.scope, subset)
        return fsum(v for b, v in self.focals if b and b & ~a == 0)

    def plausibility(self, subset: SetLike) -> float:
        a = _as_mask(self.scope, subset)
        return fsum(v for b, v in self.focals if b & a)

    def commonality(self, subset: SetLike) -> float:
        a = _as_mask(self.scope, subset)
        return fsum(v for b, v in self.focals if b & a == a)

    def set_function(self, kind: SetFunctionKind, subset: SetLike) -> float:
        kind = SetFunctionKind(kind)
        if kind is SetFunctionKind.BELIEF:
            return self.belief(subset)
        if kind is SetFunctionKind.PLAUSIBILITY:
            return self.plausibility(subset)
        return self.commonality(subset)

    def pignistic(self) -> Dict[int, float]:
        """Spread every nonempty focal mass evenly over its members"""
        result: Dict[int, float] = defaultdict(float)
        for a, v in self.focals:
            if not a:
                continue
            share = v / a.bit_count()
            for index in iter_bits(a):
                result[index] += share
        return dict(sorted(result.items()))

    def check_pseudo(self) -> None:
        """Raise unless every commonality is nonnegative within tolerance.

        Commonality is constant between a set and the intersection of the
        focal sets containing it, so the intersection closure suffices.
        """
        closure = {a for a, _ in self.focals if a}
        frontier = set(closure)
        while frontier:
            fresh = set()
            for a in frontier:
                for b in list(closure):
                    c = a & b
                    if c and c not in closure:
                        fresh.add(c)
            closure |= fresh
            frontier = fresh
        for a in sorted(closure):
            if self.commonality(a) < -settings.PSEUDO_TOLERANCE:
                raise InvalidModelError(
                    f"commonality of {render_set(self.scope, a)} is negative; "
                    "not a pseudo-belief function"
                )

    # -- algebra -------------------------------------------------------------

    def _require_scope(self, other: "MassFunction") -> None:
        if other.scope != self.scope:
            raise ScopeMismatchError(
                f"operands over {self.scope} and {other.scope}; extend first"
            )

    def normalize(self) -> "MassFunction":
        if self.normalized and all(a for a, _ in self.focals):
            return self
        nonempty = [(a, v) for a, v in self.focals if a]
        total = fsum(v for _, v in nonempty)
        scale = fsum(abs(v) for _, v in self.focals)
        if scale == 0 or total <= settings.CONFLICT_THRESHOLD * scale:
            raise TotalConflictError(
                f"total conflict: no mass left outside the empty set over {self.scope}"
            )
        focals = _canonical({a: v / total for a, v in nonempty})
        return MassFunction(self.scope, focals, pseudo=any(v < 0 for _, v in focals))

    def combine(self, other: "MassFunction") -> "MassFunction":
        """Dempster's rule: intersect focal sets, multiply, renormalize"""
        self._require_scope(other)
        products: Dict[int, float] = defaultdict(float)
        for b, mb in self.focals:
            for c, mc in other.focals:
                a = b & c
                if a:
                    products[a] += mb * mc
        scale = fsum(abs(v) for _, v in self.focals) * fsum(
            abs(v) for _, v in other.focals
        )
        nonempty = fsum(products.values())
        if scale == 0 or nonempty <= settings.CONFLICT_THRESHOLD * scale:
            raise TotalConflictError(
                f"total conflict while combining over {self.scope}"
            )
        kept = {
            a: v / nonempty
            for a, v in products.items()
            if abs(v / nonempty) >= settings.PRUNE_THRESHOLD
        }
        total = fsum(kept.values())
        if total <= settings.CONFLICT_THRESHOLD:
            raise TotalConflictError(
                f"total conflict while combining over {self.scope}"
            )
        focals = _canonical({a: v / total for a, v in kept.items()})
        return MassFunction(self.scope, focals, pseudo=any(v < 0 for _, v in focals))

    def decombine(self, other: "MassFunction") -> "MassFunction":
        """Remove ``other`` from ``self`` by dividing commonalities.

        The quotient is only needed on the nonempty subsets of the focal sets
        of ``self``; everywhere else the commonality of ``self`` vanishes.
        """
        self._require_scope(other)
        family = _down_closure(a for a, _ in self.focals)
        quotient: Dict[int, float] = {}
        for a in family:
            q12 = self.commonality(a)
            q2 = other.commonality(a)
            if abs(q2) <= settings.PRUNE_THRESHOLD:
                if abs(q12) > settings.PRUNE_THRESHOLD:
                    raise DecombinationError(
                        f"decombination undefined at {render_set(self.scope, a)}: "
                        "divisor commonality vanishes"
                    )
                continue
            quotient[a] = q12 / q2
        resolved = _invert_commonality(quotient, family)
        result = MassFunction._from_resolved(self.scope, resolved, DecombinationError)
        logger.debug(
            f"decombined over {self.scope}: {len(result)} focal sets, "
            f"pseudo={result.pseudo}"
        )
        return result

    def extend(self, target: Scope) -> "MassFunction":
        """Minimal extension: every focal set becomes its cylinder over ``target``"""
        if not self.scope.issubset(target):
            raise ScopeMismatchError(f"{target} does not contain {self.scope}")
        if target == self.scope:
            return self
        target.check_capacity()
        focals = tuple(
            sorted((extend_mask(self.scope, target, a), v) for a, v in self.focals)
        )
        return MassFunction(target, focals, self.pseudo, self.normalized)

    def marginalize(self, target: Scope) -> "MassFunction":
        if not target.issubset(self.scope):
            raise ScopeMismatchError(f"{target} is not contained in {self.scope}")
        if target == self.scope:
            return self
        merged: Dict[int, float] = defaultdict(float)
        for a, v in self.focals:
            merged[project_mask(self.scope, target, a)] += v
        return MassFunction(target, _canonical(merged), self.pseudo, self.normalized)

    def condition(self, subset: SetLike) -> "MassFunction":
        mask = _as_mask(self.scope, subset)
        if mask == 0:
            raise InvalidModelError("cannot condition on the empty set")
        return self.combine(MassFunction.categorical(self.scope, mask))


def combine_all(functions: Sequence[MassFunction]) -> MassFunction:
    """Extend every operand to the union of their scopes and combine them"""
    if not functions:
        raise InvalidModelError("nothing to combine")
    scope = functions[0].scope
    for function in functions[1:]:
        scope = scope.union(function.scope)
    result = functions[0].extend(scope)
    for function in functions[1:]:
        result = result.combine(function.extend(scope))
    return result.normalize()
