"""Network documents: the canonical JSON form of a belief network.

Keys appear in a fixed order, variables and edges are sorted by name and
reals carry 12 significant digits, so two equal networks serialize to the
same bytes.
"""

import json
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from evidential.algebra.frames import Scope, Variable, iter_bits
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import InvalidModelError, ParseError
from evidential.core.logging_config import get_logger
from evidential.network.belief_network import BeliefNetwork, build_network
from evidential.network.dag import Dag
from evidential.network.valuation import (
    NodeValuation,
    ValuationKind,
    parent_configurations,
)
from evidential.utils.formatting import round_real

logger = get_logger(__name__)

PathLike = Union[str, Path]


class VariableEntry(BaseModel):
    name: str
    domain: List[str]


class TableEntry(BaseModel):
    parents: Dict[str, str] = {}
    value: str
    p: float


class FocalEntry(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    members: List[Dict[str, str]] = Field(alias="set")
    m: float


class ValuationEntry(BaseModel):
    node: str
    kind: ValuationKind
    entries: Optional[List[TableEntry]] = None
    focals: Optional[List[FocalEntry]] = None


class NetworkDocument(BaseModel):
    format: Literal[1] = 1
    variables: List[VariableEntry]
    edges: List[Tuple[str, str]] = []
    valuations: List[ValuationEntry] = []

    @classmethod
    def from_network(cls, net: BeliefNetwork) -> "NetworkDocument":
        variables = net.variable_map
        valuations = []
        for valuation in net.valuations:
            if valuation.kind is ValuationKind.PROBABILISTIC:
                domain = variables[valuation.node].domain
                entries = [
                    TableEntry(
                        parents=dict(zip(valuation.parents, key)),
                        value=value,
                        p=round_real(p),
                    )
                    for key in parent_configurations(valuation.parents, variables)
                    for value, p in zip(domain, valuation.table[key])
                ]
                valuations.append(
                    ValuationEntry(node=valuation.node, kind=valuation.kind, entries=entries)
                )
            else:
                scope = valuation.focals.scope
                focals = [
                    FocalEntry(
                        members=[scope.configuration(i).as_dict() for i in iter_bits(mask)],
                        m=round_real(m),
                    )
                    for mask, m in valuation.focals.focals
                ]
                valuations.append(
                    ValuationEntry(node=valuation.node, kind=valuation.kind, focals=focals)
                )
        return cls(
            variables=[VariableEntry(name=v.name, domain=list(v.domain)) for v in net.variables],
            edges=list(net.dag.edges),
            valuations=valuations,
        )

    def structure(self) -> Tuple[List[Variable], Dag]:
        variables = [Variable(v.name, tuple(v.domain)) for v in self.variables]
        return variables, Dag([v.name for v in variables], self.edges)

    def to_network(self) -> BeliefNetwork:
        variables, dag = self.structure()
        by_name = {v.name: v for v in variables}
        valuations = []
        for entry in self.valuations:
            if entry.node not in by_name:
                raise InvalidModelError(f"valuation for unknown node '{entry.node}'")
            parents = dag.parents(entry.node)
            if entry.kind is ValuationKind.PROBABILISTIC:
                valuations.append(_table_valuation(entry, parents, by_name))
            else:
                valuations.append(_ds_valuation(entry, parents, by_name))
        return build_network(variables, dag, valuations)

    def dumps(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True, exclude_none=True) + "\n"


def _table_valuation(
    entry: ValuationEntry, parents: Tuple[str, ...], variables: Dict[str, Variable]
) -> NodeValuation:
    node = entry.node
    if entry.entries is None:
        raise InvalidModelError(f"probabilistic valuation of {node} has no entries")
    domain = variables[node].domain
    rows: Dict[Tuple[str, ...], List[Optional[float]]] = {}
    for item in entry.entries:
        if set(item.parents) != set(parents):
            raise InvalidModelError(
                f"valuation of {node}: entry names parents {sorted(item.parents)}, "
                f"expected {list(parents)}"
            )
        key = tuple(item.parents[p] for p in parents)
        row = rows.setdefault(key, [None] * len(domain))
        position = variables[node].index(item.value)
        if row[position] is not None:
            raise InvalidModelError(
                f"valuation of {node}: entry {node}='{item.value}' given {key} listed twice"
            )
        row[position] = item.p
    table = {}
    for key, row in rows.items():
        if any(p is None for p in row):
            raise InvalidModelError(f"valuation of {node}: row {key} is incomplete")
        table[key] = tuple(row)
    return NodeValuation.probabilistic(node, parents, table)


def _ds_valuation(
    entry: ValuationEntry, parents: Tuple[str, ...], variables: Dict[str, Variable]
) -> NodeValuation:
    node = entry.node
    if not entry.focals:
        raise InvalidModelError(f"ds valuation of {node} has no focal sets")
    scope = Scope(tuple(variables[name] for name in (node, *parents)))
    scope.check_capacity()
    merged: Dict[int, float] = defaultdict(float)
    for focal in entry.focals:
        mask = 0
        for member in focal.members:
            if set(member) != set(scope.names):
                raise InvalidModelError(
                    f"valuation of {node}: focal member {member} does not cover {scope}"
                )
            mask |= 1 << scope.index_of(member)
        if mask in merged:
            logger.warning(f"valuation of {node}: duplicate focal set merged")
        merged[mask] += focal.m
    return NodeValuation.ds(node, MassFunction.from_focals(scope, merged.items()))


def _parse(text: str, source: str) -> NetworkDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            f"{source}: {e.msg} (column {e.colno})", line=e.lineno
        ) from None
    try:
        return NetworkDocument.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        field = ".".join(str(part) for part in error["loc"])
        raise ParseError(f"{source}: field {field}: {error['msg']}") from None


def loads_network(text: str, source: str = "<string>") -> BeliefNetwork:
    return _parse(text, source).to_network()


def dumps_network(net: BeliefNetwork) -> str:
    return NetworkDocument.from_network(net).dumps()


def load_network(path: PathLike) -> BeliefNetwork:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidModelError(f"cannot read {path}: {e.strerror}") from None
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 text (byte {e.start})") from None
    net = loads_network(text, str(path))
    logger.info(f"loaded network with {len(net.variables)} variables from {path}")
    return net


def save_network(net: BeliefNetwork, path: PathLike) -> None:
    path = Path(path)
    try:
        path.write_text(dumps_network(net), encoding="utf-8")
    except OSError as e:
        raise InvalidModelError(f"cannot write {path}: {e.strerror}") from None
    logger.info(f"saved network to {path}")


def load_structure(path: PathLike) -> Tuple[List[Variable], Dag]:
    """Variables and dag of a document; valuations, if any, are ignored"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidModelError(f"cannot read {path}: {e.strerror}") from None
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 text (byte {e.start})") from None
    return _parse(text, str(path)).structure()
