"""Variables, scopes and the bitset encoding of subsets of a frame.

A frame is enumerated lexicographically by (variable name, domain index): the
first variable of a scope is the most significant digit. A subset of the frame
is a Python int whose bit ``i`` is set when configuration ``i`` belongs to it.
"""

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

import numpy as np

from evidential.config.config import settings
from evidential.core.exceptions import (
    CapacityError,
    InvalidModelError,
    ScopeMismatchError,
)


@dataclass(frozen=True)
class Variable:
    name: str
    domain: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(str(v) for v in self.domain))
        if not self.name:
            raise InvalidModelError("variable name must be non-empty")
        if not self.domain:
            raise InvalidModelError(f"variable {self.name} has an empty domain")
        if len(set(self.domain)) != len(self.domain):
            raise InvalidModelError(f"variable {self.name} repeats a domain label")

    @property
    def size(self) -> int:
        return len(self.domain)

    def index(self, value: str) -> int:
        try:
            return self.domain.index(value)
        except ValueError:
            raise InvalidModelError(
                f"value '{value}' is not in the domain of {self.name}"
            ) from None


@dataclass(frozen=True)
class Scope:
    variables: Tuple[Variable, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.variables, key=lambda v: v.name))
        names = [v.name for v in ordered]
        if len(set(names)) != len(names):
            raise InvalidModelError(f"duplicate variable in scope {names}")
        object.__setattr__(self, "variables", ordered)

    @classmethod
    def of(cls, *variables: Variable) -> "Scope":
        return cls(tuple(variables))

    @cached_property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @cached_property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(v.size for v in self.variables)

    @cached_property
    def frame_size(self) -> int:
        return math.prod(self.sizes)

    @cached_property
    def strides(self) -> Tuple[int, ...]:
        strides = []
        step = 1
        for size in reversed(self.sizes):
            strides.append(step)
            step *= size
        return tuple(reversed(strides))

    @property
    def full_mask(self) -> int:
        return (1 << self.frame_size) - 1

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Variable):
            return item in self.variables
        return item in self.names

    def __str__(self) -> str:
        return "{" + ",".join(self.names) + "}"

    def variable(self, name: str) -> Variable:
        for variable in self.variables:
            if variable.name == name:
                return variable
        raise InvalidModelError(f"unknown variable '{name}' in scope {self}")

    def union(self, other: "Scope") -> "Scope":
        merged = {v.name: v for v in self.variables}
        for variable in other.variables:
            known = merged.get(variable.name)
            if known is not None and known != variable:
                raise ScopeMismatchError(
                    f"variable {variable.name} is declared with two domains"
                )
            merged[variable.name] = variable
        return Scope(tuple(merged.values()))

    def intersection(self, other: "Scope") -> "Scope":
        return Scope(tuple(v for v in self.variables if v in other.variables))

    def restrict(self, names: Iterable[str]) -> "Scope":
        return Scope(tuple(self.variable(name) for name in set(names)))

    def without(self, names: Iterable[str]) -> "Scope":
        dropped = set(names)
        return Scope(tuple(v for v in self.variables if v.name not in dropped))

    def issubset(self, other: "Scope") -> bool:
        return all(v in other.variables for v in self.variables)

    def check_capacity(self) -> None:
        if self.frame_size > settings.CAPACITY:
            raise CapacityError(
                f"frame of scope {self} has {self.frame_size} configurations, "
                f"capacity is {settings.CAPACITY}"
            )

    def index_of(self, values: Union[Mapping[str, str], Sequence[str]]) -> int:
        if isinstance(values, Mapping):
            missing = [name for name in self.names if name not in values]
            if missing:
                raise InvalidModelError(f"assignment lacks variables {missing}")
            labels = [values[name] for name in self.names]
        else:
            labels = list(values)
            if len(labels) != len(self.variables):
                raise InvalidModelError(
                    f"expected {len(self.variables)} values for scope {self}"
                )
        return sum(
            v.index(label) * stride
            for v, label, stride in zip(self.variables, labels, self.strides)
        )

    def configuration(self, index: int) -> "Configuration":
        if not 0 <= index < self.frame_size:
            raise InvalidModelError(f"configuration index {index} outside {self}")
        values = []
        for variable, stride in zip(self.variables, self.strides):
            values.append(variable.domain[(index // stride) % variable.size])
        return Configuration(self, tuple(values))

    def configurations(self) -> Iterator["Configuration"]:
        for index in range(self.frame_size):
            yield self.configuration(index)

    def digits(self) -> np.ndarray:
        """Domain indices of every configuration, one row per configuration"""
        return _digits(self)


@dataclass(frozen=True)
class Configuration:
    scope: Scope
    values: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != len(self.scope):
            raise InvalidModelError(f"expected {len(self.scope)} values")
        for variable, value in zip(self.scope.variables, self.values):
            variable.index(value)

    @property
    def index(self) -> int:
        return self.scope.index_of(self.values)

    def as_dict(self) -> dict:
        return dict(zip(self.scope.names, self.values))

    def project(self, target: Scope) -> "Configuration":
        assignment = self.as_dict()
        return Configuration(target, tuple(assignment[name] for name in target.names))

    def __str__(self) -> str:
        if len(self.values) == 1:
            return self.values[0]
        return "(" + ",".join(self.values) + ")"


ConfigurationLike = Union[Configuration, Mapping[str, str], Sequence[str]]


def _configuration_index(scope: Scope, item: ConfigurationLike) -> int:
    if isinstance(item, Configuration):
        if item.scope != scope:
            raise ScopeMismatchError(f"configuration is not over scope {scope}")
        return item.index
    if isinstance(item, str):
        return scope.index_of([item])
    return scope.index_of(item)


@dataclass(frozen=True)
class FocalSet:
    """A subset of the frame of ``scope``, stored as a bitset."""

    scope: Scope
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask > self.scope.full_mask:
            raise InvalidModelError(f"bitset does not fit the frame of {self.scope}")

    @classmethod
    def of(cls, scope: Scope, members: Iterable[ConfigurationLike]) -> "FocalSet":
        mask = 0
        for member in members:
            mask |= 1 << _configuration_index(scope, member)
        return cls(scope, mask)

    @classmethod
    def full(cls, scope: Scope) -> "FocalSet":
        return cls(scope, scope.full_mask)

    @classmethod
    def cylinder(cls, scope: Scope, name: str, values: Iterable[str]) -> "FocalSet":
        """Configurations whose ``name`` component lies in ``values``"""
        variable = scope.variable(name)
        position = scope.names.index(name)
        accepted = [variable.index(value) for value in values]
        column = scope.digits()[:, position]
        return cls(scope, mask_from_bools(np.isin(column, accepted)))

    def indices(self) -> List[int]:
        return list(iter_bits(self.mask))

    def members(self) -> List[Configuration]:
        return [self.scope.configuration(i) for i in iter_bits(self.mask)]

    def is_empty(self) -> bool:
        return self.mask == 0

    def issubset(self, other: "FocalSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def complement(self) -> "FocalSet":
        return FocalSet(self.scope, self.scope.full_mask ^ self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, item: ConfigurationLike) -> bool:
        return bool(self.mask >> _configuration_index(self.scope, item) & 1)

    def __and__(self, other: "FocalSet") -> "FocalSet":
        self._check(other)
        return FocalSet(self.scope, self.mask & other.mask)

    def __or__(self, other: "FocalSet") -> "FocalSet":
        self._check(other)
        return FocalSet(self.scope, self.mask | other.mask)

    def __sub__(self, other: "FocalSet") -> "FocalSet":
        self._check(other)
        return FocalSet(self.scope, self.mask & ~other.mask)

    def __str__(self) -> str:
        return render_set(self.scope, self.mask)

    def _check(self, other: "FocalSet") -> None:
        if other.scope != self.scope:
            raise ScopeMismatchError(f"sets over {self.scope} and {other.scope}")


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits in increasing order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_from_bools(flags: np.ndarray) -> int:
    packed = np.packbits(np.asarray(flags, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def bools_from_mask(mask: int, size: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def render_set(scope: Scope, mask: int) -> str:
    return "{" + ",".join(str(scope.configuration(i)) for i in iter_bits(mask)) + "}"


@lru_cache(maxsize=512)
def _digits(scope: Scope) -> np.ndarray:
    if not scope.variables:
        digits = np.zeros((1, 0), dtype=np.int64)
    else:
        digits = np.indices(scope.sizes).reshape(len(scope.variables), -1).T
    digits.setflags(write=False)
    return digits


@lru_cache(maxsize=1024)
def projection_map(source: Scope, target: Scope) -> np.ndarray:
    """Index of the projection onto ``target`` of every configuration of ``source``"""
    if not target.issubset(source):
        raise ScopeMismatchError(f"{target} is not contained in {source}")
    digits = _digits(source)
    result = np.zeros(source.frame_size, dtype=np.int64)
    for name, stride in zip(target.names, target.strides):
        result += digits[:, source.names.index(name)] * stride
    result.setflags(write=False)
    return result


def project_mask(source: Scope, target: Scope, mask: int) -> int:
    image = projection_map(source, target)[bools_from_mask(mask, source.frame_size)]
    flags = np.zeros(target.frame_size, dtype=bool)
    flags[image] = True
    return mask_from_bools(flags)


def extend_mask(source: Scope, target: Scope, mask: int) -> int:
    """Cylinder over ``target`` of a subset of the frame of ``source``"""
    flags = bools_from_mask(mask, source.frame_size)
    return mask_from_bools(flags[projection_map(target, source)])
