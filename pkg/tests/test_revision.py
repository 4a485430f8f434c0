import random

import pytest

from evidential.algebra.frames import Scope
from evidential.algebra.mass import MassFunction
from evidential.algebra.maxproduct import fold_scores
from evidential.core.exceptions import InvalidModelError, TotalConflictError
from evidential.jointree import (
    CombinationMode,
    build_join_tree,
    network_family,
    node_marginal,
    propagate,
)
from evidential.network.belief_network import build_network
from evidential.network.evidence import EvidenceSet
from evidential.network.valuation import NodeValuation
from evidential.revision import (
    Conditioning,
    Explanatory,
    Hypothesizing,
    combine_max,
    marginalize_max,
    max_marginal,
    revise,
)

from .conftest import binary, random_ds_network, random_mass, random_probabilistic_network
from .oracles import max_combination, max_projection, most_probable


def test_most_probable_configuration(ab_net):
    explanation = revise(ab_net)
    assert explanation.assignment == {"a": "t", "b": "t"}
    assert explanation.score == pytest.approx(0.63)
    assert explanation.render() == "a=t b=t beta=0.630000000000"


def test_hypothesizing_a_value(ab_net):
    explanation = revise(ab_net, Hypothesizing("b", "f"))
    assert explanation.assignment == {"a": "f"}
    assert explanation.evidence == {"b": "f"}
    assert explanation.score == pytest.approx(0.15)


def test_conditioning_on_findings(ab_net):
    explanation = revise(ab_net, Conditioning(EvidenceSet.of({"a": "f"})))
    assert explanation.assignment == {"b": "t"}
    assert explanation.score == pytest.approx(0.15)


def test_explanatory_reports_max_marginal(ab_net):
    explanation = revise(ab_net, Explanatory("a"))
    assert explanation.target == "a"
    assert explanation.max_marginal["t"] == pytest.approx(0.63)
    assert explanation.max_marginal["f"] == pytest.approx(0.15)


def test_single_node():
    net = build_network(
        [binary("a")], [], [NodeValuation.probabilistic("a", (), {(): (0.7, 0.3)})]
    )
    explanation = revise(net)
    assert explanation.assignment == {"a": "t"}
    assert explanation.score == pytest.approx(0.7)


def test_ties_are_all_reported_in_order():
    net = build_network(
        [binary("a")], [], [NodeValuation.probabilistic("a", (), {(): (0.5, 0.5)})]
    )
    explanation = revise(net)
    assert explanation.assignment == {"a": "t"}
    assert explanation.ties == [{"a": "t"}, {"a": "f"}]


def test_ds_network_explanation(mp_net):
    explanation = revise(mp_net)
    assert explanation.assignment == {"p": "t", "q": "t"}
    assert explanation.score == pytest.approx(1.0)


def test_contradicting_findings(mp_net):
    with pytest.raises(TotalConflictError):
        revise(mp_net, Conditioning(EvidenceSet.of({"q": "f"})))


def test_unknown_value_rejected(ab_net):
    with pytest.raises(InvalidModelError):
        revise(ab_net, Hypothesizing("b", "maybe"))


def test_random_networks_agree_with_enumeration():
    rng = random.Random(17)
    for _ in range(50):
        net = random_probabilistic_network(rng)
        observed = {}
        if len(net.names) > 1 and rng.random() < 0.5:
            observed[rng.choice(net.names)] = rng.choice(["t", "f"])
        explanation = revise(net, evidence=EvidenceSet.of(observed))
        expected, score = most_probable(net, observed)
        assert explanation.score == pytest.approx(score, rel=1e-9)
        assert explanation.assignment == expected


def test_max_marginal_matches_enumeration():
    rng = random.Random(19)
    for _ in range(20):
        net = random_probabilistic_network(rng)
        name = rng.choice(net.names)
        scores = max_marginal(net, name)
        for value in ("t", "f"):
            _, expected = most_probable(net, {name: value})
            assert scores[value] == pytest.approx(expected, rel=1e-9)


class TestMaxOperators:
    def test_combine_max_keeps_best_product(self):
        x = Scope.of(binary("x"))
        m1 = MassFunction.from_focals(x, [(0b01, 0.6), (0b11, 0.4)])
        m2 = MassFunction.from_focals(x, [(0b10, 0.5), (0b11, 0.5)])
        best = combine_max(m1, m2)
        assert best.masses() == pytest.approx({0b01: 0.3, 0b10: 0.2, 0b11: 0.2})

    def test_marginalize_max_records_witnesses(self, ab_net):
        joint = MassFunction.potential(
            ab_net.scope, [(0b0001, 0.63), (0b0010, 0.07), (0b0100, 0.15), (0b1000, 0.15)]
        )
        projected, witnesses = marginalize_max(joint, ab_net.scope_of(["b"]))
        assert projected.masses() == pytest.approx({0b01: 0.63, 0b10: 0.15})
        assert witnesses[0b01] == (0b0001,)
        assert witnesses[0b10] == (0b1000,)

    def test_marginalize_max_ties(self, ab_net):
        joint = MassFunction.potential(ab_net.scope, [(0b0010, 0.4), (0b1000, 0.4)])
        projected, witnesses = marginalize_max(joint, ab_net.scope_of(["b"]))
        assert projected.masses() == pytest.approx({0b10: 0.4})
        assert witnesses[0b10] == (0b0010, 0b1000)


def _three_focal(rng: random.Random, scope: Scope) -> MassFunction:
    masks = rng.sample(range(1, scope.full_mask + 1), 3)
    weights = [rng.uniform(0.1, 1.0) for _ in masks]
    total = sum(weights)
    return MassFunction.from_focals(scope, [(a, w / total) for a, w in zip(masks, weights)])


class TestMaxOperatorProperties:
    x, y, z = binary("x"), binary("y"), binary("z")

    def test_combine_max_matches_enumeration(self):
        rng = random.Random(61)
        scope = Scope.of(self.x, self.y)
        for _ in range(50):
            m1, m2 = _three_focal(rng, scope), _three_focal(rng, scope)
            assert combine_max(m1, m2).masses() == pytest.approx(max_combination(m1, m2))

    def test_marginalize_max_matches_enumeration(self):
        rng = random.Random(67)
        scope = Scope.of(self.x, self.y, self.z)
        for _ in range(50):
            m = random_mass(rng, scope, max_focals=6)
            for target in (Scope.of(self.x), Scope.of(self.y, self.z), Scope.of(self.x, self.z)):
                projected, _ = marginalize_max(m, target)
                assert projected.masses() == pytest.approx(max_projection(m, target))

    def test_commutative_and_associative(self):
        rng = random.Random(71)
        scope = Scope.of(self.x, self.y)
        for _ in range(50):
            m1, m2, m3 = (random_mass(rng, scope) for _ in range(3))
            assert combine_max(m1, m2).masses() == pytest.approx(combine_max(m2, m1).masses())
            left = combine_max(combine_max(m1, m2), m3)
            right = combine_max(m1, combine_max(m2, m3))
            assert left.masses() == pytest.approx(right.masses())

    def test_combination_exchanges_with_projection(self):
        rng = random.Random(73)
        s1, s2 = Scope.of(self.x, self.y), Scope.of(self.y, self.z)
        union, shared = s1.union(s2), s1.intersection(s2)
        for _ in range(50):
            m1, m2 = random_mass(rng, s1), random_mass(rng, s2)
            joint = combine_max(m1.extend(union), m2.extend(union))
            left, _ = marginalize_max(joint, s1)
            right = combine_max(m1, marginalize_max(m2, shared)[0].extend(s1))
            assert left.masses() == pytest.approx(right.masses())

    def test_projection_is_transitive(self):
        rng = random.Random(79)
        scope = Scope.of(self.x, self.y, self.z)
        middle, target = Scope.of(self.x, self.y), Scope.of(self.x)
        for _ in range(50):
            m = random_mass(rng, scope, max_focals=6)
            stepwise = marginalize_max(marginalize_max(m, middle)[0], target)[0]
            assert stepwise.masses() == pytest.approx(marginalize_max(m, target)[0].masses())


@pytest.mark.parametrize(
    "make_network", [random_probabilistic_network, random_ds_network]
)
def test_max_tree_node_scores_match_global_fold(make_network):
    rng = random.Random(83)
    for _ in range(30):
        net = make_network(rng)
        family = network_family(net)
        tree = propagate(
            build_join_tree(family, net.scope_of([net.names[0]])),
            CombinationMode.MAX_PRODUCT,
        )
        scores = fold_scores(net.scope, net.lowered)
        for node in range(len(tree)):
            expected, _ = marginalize_max(scores, tree.nodes[node].scope)
            assert node_marginal(tree, node).allclose(expected, 1e-9)
