import logging
import random

import pytest

from evidential.algebra.frames import FocalSet, Scope
from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import CycleError, InvalidModelError, TotalConflictError
from evidential.models.query import And, Atom, Or
from evidential.network.belief_network import build_network, remove_leaf
from evidential.network.dag import Dag
from evidential.network.evidence import EvidenceSet
from evidential.network.factorization import (
    factorize_joint,
    joint_distribution,
    pseudo_condition,
)
from evidential.network.valuation import NodeValuation, ValuationKind

from .conftest import binary, random_ds_network, random_probabilistic_network

TOL = 1e-9


class TestDag:
    def test_cycle_is_rejected(self):
        with pytest.raises(CycleError, match="cycle"):
            Dag(["a", "b"], [("a", "b"), ("b", "a")])

    def test_undeclared_endpoint(self):
        with pytest.raises(InvalidModelError):
            Dag(["a"], [("a", "b")])

    def test_sorted_accessors(self):
        dag = Dag(["c", "a", "b"], [("b", "c"), ("a", "c")])
        assert dag.nodes == ("a", "b", "c")
        assert dag.parents("c") == ("a", "b")
        assert dag.topological_order() == ["a", "b", "c"]
        assert dag.ancestors(["c"]) == {"a", "b"}

    def test_example_network_structure(self, fixtures_dir):
        from evidential.io.documents import load_structure

        variables, dag = load_structure(fixtures_dir / "example_dag.json")
        assert len(variables) == 8
        assert dag.parents("p8") == ("p5", "p6", "p7")
        assert dag.parents("p4") == ("p2", "p3")


class TestBuildNetwork:
    def test_single_node(self):
        net = build_network(
            [binary("a")], [], [NodeValuation.probabilistic("a", (), {(): (0.7, 0.3)})]
        )
        assert net.mode is ValuationKind.PROBABILISTIC
        assert net.names == ("a",)

    def test_row_must_sum_to_one(self):
        with pytest.raises(InvalidModelError, match=r"sums to 0\.8"):
            build_network(
                [binary("a")], [], [NodeValuation.probabilistic("a", (), {(): (0.5, 0.3)})]
            )

    def test_missing_parent_configuration(self):
        with pytest.raises(InvalidModelError, match="missing"):
            build_network(
                [binary("a"), binary("b")],
                [("a", "b")],
                [
                    NodeValuation.probabilistic("a", (), {(): (0.5, 0.5)}),
                    NodeValuation.probabilistic("b", ("a",), {("t",): (0.5, 0.5)}),
                ],
            )

    def test_parents_must_match_dag(self):
        with pytest.raises(InvalidModelError, match="parents"):
            build_network(
                [binary("a"), binary("b")],
                [],
                [
                    NodeValuation.probabilistic("a", (), {(): (0.5, 0.5)}),
                    NodeValuation.probabilistic(
                        "b", ("a",), {("t",): (0.5, 0.5), ("f",): (0.5, 0.5)}
                    ),
                ],
            )

    def test_missing_valuation(self):
        with pytest.raises(InvalidModelError, match="missing valuation"):
            build_network([binary("a"), binary("b")], [], [])

    def test_lowering_is_reversible(self, ab_net):
        for valuation, lowered in zip(ab_net.valuations, ab_net.lowered):
            back = NodeValuation.from_mass(valuation.node, lowered, ab_net.variable_map)
            assert back == valuation

    def test_all_ds_valuations_make_a_ds_network(self, mp_net):
        assert mp_net.mode is ValuationKind.DS


class TestJointDistribution:
    def test_ab_example(self, ab_net):
        joint = joint_distribution(ab_net)
        expected = {0: 0.63, 1: 0.07, 2: 0.15, 3: 0.15}
        for index, p in expected.items():
            assert joint.mass(1 << index) == pytest.approx(p, abs=TOL)

    def test_product_and_combination_agree(self):
        rng = random.Random(21)
        for _ in range(20):
            net = random_probabilistic_network(rng, max_nodes=4)
            product = joint_distribution(net, method="product")
            combination = joint_distribution(net, method="combination")
            assert product.allclose(combination)

    def test_single_node(self):
        net = build_network(
            [binary("a")], [], [NodeValuation.probabilistic("a", (), {(): (0.7, 0.3)})]
        )
        joint = joint_distribution(net)
        assert joint.masses() == pytest.approx({1: 0.7, 2: 0.3})

    def test_modus_ponens_network(self, mp_net):
        joint = joint_distribution(mp_net)
        assert joint.focals == ((0b0001, 1.0),)


class TestFactorization:
    def test_pseudo_conditioning_gives_conditional_table(self, ab_net):
        joint = joint_distribution(ab_net)
        conditional = pseudo_condition(joint, ab_net.scope_of(["a"]))
        back = NodeValuation.from_mass("b", conditional, ab_net.variable_map)
        assert back.table[("t",)] == pytest.approx((0.9, 0.1))
        assert back.table[("f",)] == pytest.approx((0.5, 0.5))

    def test_full_scope_is_neutral(self):
        rng = random.Random(8)
        net = random_ds_network(rng, max_nodes=3)
        joint = joint_distribution(net)
        neutral = pseudo_condition(joint, joint.scope)
        assert neutral.combine(joint).allclose(joint)

    def test_ds_round_trip(self):
        rng = random.Random(9)
        for _ in range(20):
            net = random_ds_network(rng, max_nodes=3, max_focals=3)
            joint = joint_distribution(net)
            h = joint.scope.restrict(joint.scope.names[:1])
            conditional = pseudo_condition(joint, h)
            assert conditional.combine(joint.marginalize(h).extend(joint.scope)).allclose(joint)

    def test_recovers_tables(self, ab_net):
        valuations = factorize_joint(joint_distribution(ab_net), ab_net.dag)
        for found, original in zip(valuations, ab_net.valuations):
            assert found.node == original.node
            for key, row in original.table.items():
                assert found.table[key] == pytest.approx(row, abs=TOL)

    def test_independent_product(self):
        a, b = binary("a"), binary("b")
        scope = Scope.of(a, b)
        joint = MassFunction.from_focals(
            scope, [(1, 0.2 * 0.6), (2, 0.2 * 0.4), (4, 0.8 * 0.6), (8, 0.8 * 0.4)]
        )
        valuations = factorize_joint(joint, Dag(["a", "b"]))
        assert valuations[0].table[()] == pytest.approx((0.2, 0.8))
        assert valuations[1].table[()] == pytest.approx((0.6, 0.4))

    def test_non_imap_is_a_warning(self, ab_net, caplog):
        joint = joint_distribution(ab_net)
        with caplog.at_level(logging.WARNING, logger="evidential"):
            valuations = factorize_joint(joint, Dag(["a", "b"]))
        assert len(valuations) == 2
        assert "not an I-map" in caplog.text


class TestRemoveLeaf:
    def test_marginal_is_preserved(self):
        rng = random.Random(12)
        for _ in range(20):
            net = random_probabilistic_network(rng, max_nodes=5)
            leaf = next(n for n in reversed(net.dag.topological_order()) if not net.dag.children(n))
            if len(net.names) == 1:
                continue
            reduced = remove_leaf(net, leaf)
            expected = joint_distribution(net).marginalize(reduced.scope)
            assert joint_distribution(reduced).allclose(expected)

    def test_inner_node_is_rejected(self, ab_net):
        with pytest.raises(InvalidModelError, match="children"):
            remove_leaf(ab_net, "a")

    def test_ds_leaf_constraining_parents(self):
        p, q = binary("p"), binary("q")
        family = Scope.of(p, q)
        net = build_network(
            [p, q],
            [("p", "q")],
            [
                NodeValuation.ds("p", MassFunction.vacuous(Scope.of(p))),
                NodeValuation.ds("q", MassFunction.categorical(family, FocalSet.of(family, [("t", "t")]))),
            ],
        )
        with pytest.raises(InvalidModelError, match="constrains"):
            remove_leaf(net, "q")

    def test_ds_implication_leaf(self, mp_net):
        reduced = remove_leaf(mp_net, "q")
        assert reduced.names == ("p",)


class TestEvidence:
    def test_clamp_intersects(self):
        evidence = EvidenceSet.of({"a": ["t", "f"]}).clamp("a", "t")
        assert evidence.points() == {"a": "t"}

    def test_contradiction(self):
        with pytest.raises(TotalConflictError):
            EvidenceSet.of({"a": "t"}).clamp("a", "f")

    def test_unknown_value(self, ab_net):
        with pytest.raises(InvalidModelError):
            EvidenceSet.of({"a": "x"}).validate(ab_net)

    def test_as_expression(self):
        evidence = EvidenceSet.of({"b": ["t", "f"], "a": "t"})
        assert evidence.as_expression() == And(
            (Atom("a", "t"), Or((Atom("b", "f"), Atom("b", "t"))))
        )
        assert str(EvidenceSet()) == ""

    def test_hyperedges(self, ab_net):
        edges = EvidenceSet.of({"b": "t"}, [Or((Atom("a", "t"), Atom("b", "f")))]).hyperedges(ab_net)
        assert [e.scope.names for e in edges] == [("b",), ("a", "b")]
        assert edges[0].focals == ((0b01, 1.0),)
