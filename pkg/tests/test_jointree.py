import random

import pytest

from evidential.algebra.mass import MassFunction
from evidential.config.config import settings
from evidential.core.exceptions import InvalidModelError, PropagationError
from evidential.jointree import (
    CombinationMode,
    Hyperedge,
    build_join_tree,
    eliminate_variable,
    network_family,
    node_marginal,
    propagate,
    query_marginal,
)
from evidential.network.evidence import EvidenceSet

from .conftest import random_ds_network, random_probabilistic_network
from .oracles import global_combination, marginal

TOL = 1e-9


def _probabilities(net, m: MassFunction, name: str) -> dict:
    domain = net.variable(name).domain
    return {value: m.mass(1 << i) for i, value in enumerate(domain)}


class TestElimination:
    def test_eliminate_fuses_and_sums_out(self, ab_net):
        family = network_family(ab_net)
        reduced = eliminate_variable(family, "a")
        assert len(reduced) == 1
        b = reduced[0].local
        assert b.scope.names == ("b",)
        assert b.mass(0b01) == pytest.approx(0.78)
        assert b.mass(0b10) == pytest.approx(0.22)

    def test_missing_variable(self, ab_net):
        with pytest.raises(InvalidModelError, match="no hyperedge"):
            eliminate_variable(network_family(ab_net), "z")


class TestConstruction:
    def test_single_node_tree(self, ab_net):
        a = ab_net.scope_of(["a"])
        tree = build_join_tree([Hyperedge.of(ab_net.lowered[0])], a)
        assert len(tree) == 1
        assert tree.edges == ()
        tree.check()

    def test_running_intersection_on_random_networks(self):
        rng = random.Random(11)
        for _ in range(30):
            net = random_probabilistic_network(rng)
            tree = build_join_tree(network_family(net), net.scope_of([net.names[-1]]))
            tree.check()
            assert net.names[-1] in tree.nodes[tree.root].scope

    def test_root_scope_must_be_covered(self, ab_net):
        family = [Hyperedge.of(ab_net.lowered[0])]
        with pytest.raises(InvalidModelError, match="not covered"):
            build_join_tree(family, ab_net.scope_of(["b"]))

    def test_empty_family(self, ab_net):
        with pytest.raises(InvalidModelError):
            build_join_tree([], ab_net.scope_of(["a"]))

    def test_dump_names_root(self, ab_net):
        tree = build_join_tree(network_family(ab_net), ab_net.scope_of(["b"]))
        text = tree.dump()
        assert text.startswith("elimination order:")
        assert "(root)" in text


class TestPropagation:
    def test_ab_marginal(self, ab_net):
        m = query_marginal(ab_net, "b")
        assert m.mass(0b01) == pytest.approx(0.78)

    def test_ab_posterior_given_child(self, ab_net):
        m = query_marginal(ab_net, "a", EvidenceSet.of({"b": "t"}))
        assert m.mass(0b01) == pytest.approx(0.63 / 0.78)

    def test_propagate_leaves_input_untouched(self, ab_net):
        tree = build_join_tree(network_family(ab_net), ab_net.scope_of(["a"]))
        filled = propagate(tree, CombinationMode.SUM_PRODUCT)
        assert tree.mode is None
        assert not tree.mailboxes
        assert filled.mode is CombinationMode.SUM_PRODUCT

    def test_marginal_before_propagation(self, ab_net):
        tree = build_join_tree(network_family(ab_net), ab_net.scope_of(["a"]))
        with pytest.raises(PropagationError, match="propagate first"):
            node_marginal(tree, tree.root)

    def test_random_probabilistic_networks_match_brute_force(self):
        rng = random.Random(3)
        for _ in range(50):
            net = random_probabilistic_network(rng)
            target = rng.choice(net.names)
            observed = {}
            others = [n for n in net.names if n != target]
            if others and rng.random() < 0.6:
                observed[rng.choice(others)] = rng.choice(["t", "f"])
            m = query_marginal(net, target, EvidenceSet.of(observed))
            expected = marginal(net, target, observed)
            for value, p in _probabilities(net, m, target).items():
                assert p == pytest.approx(expected[value], abs=TOL)

    def test_random_ds_networks_match_global_combination(self):
        rng = random.Random(5)
        for _ in range(50):
            net = random_ds_network(rng)
            joint = global_combination(net)
            tree = propagate(
                build_join_tree(network_family(net), net.scope_of([net.names[0]])),
                CombinationMode.SUM_PRODUCT,
            )
            for index, node in enumerate(tree.nodes):
                local = node_marginal(tree, index)
                assert local.allclose(joint.marginalize(node.scope), TOL)

    def test_schedule_does_not_change_marginals(self):
        rng = random.Random(9)
        for _ in range(20):
            net = random_probabilistic_network(rng)
            tree = build_join_tree(network_family(net), net.scope_of([net.names[0]]))
            default = propagate(tree, CombinationMode.SUM_PRODUCT)
            schedule = []
            done = set()
            wave = tree.ready(done)
            while wave:
                edge = rng.choice(wave)
                schedule.append(edge)
                done.add(edge)
                wave = tree.ready(done)
            custom = propagate(tree, CombinationMode.SUM_PRODUCT, schedule)
            for index in range(len(tree)):
                assert node_marginal(custom, index).allclose(
                    node_marginal(default, index), TOL
                )

    def test_incomplete_schedule_rejected(self, fixtures_dir):
        from evidential.io.documents import load_network

        net = load_network(fixtures_dir / "chain.json")
        tree = build_join_tree(network_family(net), net.scope_of(["A"]))
        assert len(tree) == 2
        with pytest.raises(PropagationError, match="every directed tree edge"):
            propagate(tree, CombinationMode.SUM_PRODUCT, tree.directed_edges()[:1])

    def test_parallel_workers_match_sequential(self):
        rng = random.Random(13)
        net = random_probabilistic_network(rng, max_nodes=6)
        tree = build_join_tree(network_family(net), net.scope_of([net.names[0]]))
        sequential = propagate(tree, CombinationMode.SUM_PRODUCT)
        settings.PROPAGATION_WORKERS = 4
        parallel = propagate(tree, CombinationMode.SUM_PRODUCT)
        for index in range(len(tree)):
            assert node_marginal(parallel, index).allclose(
                node_marginal(sequential, index), TOL
            )

    def test_ds_modus_ponens_marginal(self, mp_net):
        m = query_marginal(mp_net, "q")
        assert m.mass(0b01) == pytest.approx(1.0)
