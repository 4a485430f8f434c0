import random
from pathlib import Path
from typing import List

import pytest

from evidential.algebra.frames import FocalSet, Scope, Variable
from evidential.algebra.mass import MassFunction
from evidential.config.config import settings
from evidential.network.belief_network import BeliefNetwork, build_network
from evidential.network.valuation import NodeValuation

FIXTURES = Path(__file__).parent / "fixtures"
BINARY = ("t", "f")


def binary(name: str) -> Variable:
    return Variable(name, BINARY)


def ab_network() -> BeliefNetwork:
    """a -> b with P(a=t)=0.7, P(b=t|a=t)=0.9, P(b=t|a=f)=0.5"""
    return build_network(
        [binary("a"), binary("b")],
        [("a", "b")],
        [
            NodeValuation.probabilistic("a", (), {(): (0.7, 0.3)}),
            NodeValuation.probabilistic("b", ("a",), {("t",): (0.9, 0.1), ("f",): (0.5, 0.5)}),
        ],
    )


def modus_ponens_network() -> BeliefNetwork:
    """ds network: the fact p=t and the implication p -> q"""
    p, q = binary("p"), binary("q")
    family = Scope.of(p, q)
    implication = FocalSet.of(family, [("f", "f"), ("f", "t"), ("t", "t")])
    return build_network(
        [p, q],
        [("p", "q")],
        [
            NodeValuation.ds("p", MassFunction.categorical(Scope.of(p), FocalSet.of(Scope.of(p), ["t"]))),
            NodeValuation.ds("q", MassFunction.categorical(family, implication)),
        ],
    )


def random_dag_edges(rng: random.Random, names: List[str], max_parents: int = 3):
    edges = []
    for j, child in enumerate(names):
        candidates = names[:j]
        rng.shuffle(candidates)
        count = rng.randint(0, min(max_parents, len(candidates)))
        edges.extend((parent, child) for parent in candidates[:count])
    return edges


def random_probabilistic_network(
    rng: random.Random, max_nodes: int = 6, max_parents: int = 3
) -> BeliefNetwork:
    names = [f"v{i}" for i in range(rng.randint(1, max_nodes))]
    variables = [binary(name) for name in names]
    edges = random_dag_edges(rng, list(names), max_parents)
    valuations = []
    for name in names:
        parents = sorted(p for p, c in edges if c == name)
        table = {}
        for index in range(2 ** len(parents)):
            key = tuple(BINARY[(index >> (len(parents) - 1 - k)) & 1] for k in range(len(parents)))
            p = rng.uniform(0.05, 0.95)
            table[key] = (p, 1.0 - p)
        valuations.append(NodeValuation.probabilistic(name, parents, table))
    return build_network(variables, edges, valuations)


def random_mass(rng: random.Random, scope: Scope, max_focals: int = 4) -> MassFunction:
    """Random mass function that always keeps some mass on the whole frame"""
    masks = {scope.full_mask}
    target = min(rng.randint(1, max_focals), scope.full_mask)
    while len(masks) < target:
        masks.add(rng.randint(1, scope.full_mask))
    weights = [rng.uniform(0.1, 1.0) for _ in masks]
    total = sum(weights)
    return MassFunction.from_focals(
        scope, [(mask, w / total) for mask, w in zip(sorted(masks), weights)]
    )


def random_ds_network(
    rng: random.Random, max_nodes: int = 5, max_focals: int = 4
) -> BeliefNetwork:
    names = [f"d{i}" for i in range(rng.randint(1, max_nodes))]
    variables = {name: binary(name) for name in names}
    edges = random_dag_edges(rng, list(names), max_parents=2)
    valuations = []
    for name in names:
        parents = [p for p, c in edges if c == name]
        family = Scope(tuple(variables[n] for n in [name, *parents]))
        valuations.append(NodeValuation.ds(name, random_mass(rng, family, max_focals)))
    return build_network(list(variables.values()), edges, valuations)


@pytest.fixture(autouse=True)
def restore_settings():
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture
def ab_net() -> BeliefNetwork:
    return ab_network()


@pytest.fixture
def mp_net() -> BeliefNetwork:
    return modus_ponens_network()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
