import random

import pytest

from evidential.core.exceptions import InvalidModelError
from evidential.network.dag import Dag
from evidential.network.dseparation import d_separated

from .conftest import random_dag_edges
from .oracles import trail_d_separated


@pytest.fixture
def chain() -> Dag:
    return Dag(["A", "B", "C"], [("A", "B"), ("B", "C")])


@pytest.fixture
def collider() -> Dag:
    return Dag(["A", "B", "C", "D"], [("A", "C"), ("B", "C"), ("C", "D")])


def test_chain_blocked_by_middle(chain):
    assert d_separated(chain, ["A"], ["C"], ["B"])
    assert not d_separated(chain, ["A"], ["C"], [])


def test_fork_blocked_by_common_cause():
    dag = Dag(["A", "B", "C"], [("B", "A"), ("B", "C")])
    assert d_separated(dag, ["A"], ["C"], ["B"])
    assert not d_separated(dag, ["A"], ["C"], [])


def test_collider_opens_when_observed(collider):
    assert d_separated(collider, ["A"], ["B"], [])
    assert not d_separated(collider, ["A"], ["B"], ["C"])


def test_collider_opens_through_descendant(collider):
    assert not d_separated(collider, ["A"], ["B"], ["D"])


def test_empty_sets_are_separated(chain):
    assert d_separated(chain, [], ["C"], ["B"])


def test_overlapping_sets_rejected(chain):
    with pytest.raises(InvalidModelError, match="disjoint"):
        d_separated(chain, ["A"], ["A"], [])


def test_unknown_node_rejected(chain):
    with pytest.raises(InvalidModelError):
        d_separated(chain, ["A"], ["Z"], [])


def test_example_network(fixtures_dir):
    from evidential.io.documents import load_structure

    _, dag = load_structure(fixtures_dir / "example_dag.json")
    assert d_separated(dag, ["p1"], ["p3"], [])
    assert not d_separated(dag, ["p1"], ["p3"], ["p8"])
    assert d_separated(dag, ["p5"], ["p6"], ["p4"])
    assert not d_separated(dag, ["p5"], ["p6"], ["p4", "p8"])


def test_random_dags_agree_with_trail_enumeration():
    rng = random.Random(7)
    for _ in range(200):
        names = [f"n{i}" for i in range(rng.randint(2, 8))]
        dag = Dag(names, random_dag_edges(rng, list(names), max_parents=2))
        shuffled = list(names)
        rng.shuffle(shuffled)
        cut_j = rng.randint(1, len(shuffled) - 1)
        cut_k = rng.randint(cut_j + 1, len(shuffled))
        J, K, L = shuffled[:cut_j], shuffled[cut_j:cut_k], shuffled[cut_k:]
        assert d_separated(dag, J, K, L) == trail_d_separated(dag, J, K, L), (dag, J, K, L)
