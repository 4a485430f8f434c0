"""Underlying distribution of a network and its factorization back into
node valuations by pseudo-conditioning."""

from typing import List

import numpy as np

from evidential.algebra.frames import Scope
from evidential.algebra.mass import MassFunction, combine_all
from evidential.core.exceptions import InvalidModelError, ScopeMismatchError
from evidential.core.logging_config import get_logger
from evidential.network.belief_network import BeliefNetwork
from evidential.network.dag import Dag
from evidential.network.valuation import NodeValuation, ValuationKind

logger = get_logger(__name__)


def _product_joint(net: BeliefNetwork) -> MassFunction:
    scope = net.scope
    digits = scope.digits()
    probabilities = np.ones(scope.frame_size)
    for valuation in net.valuations:
        table = valuation.cpt_array(net.variable_map)
        row = np.zeros(scope.frame_size, dtype=np.int64)
        step = 1
        for parent in reversed(valuation.parents):
            row += digits[:, scope.names.index(parent)] * step
            step *= net.variable(parent).size
        column = digits[:, scope.names.index(valuation.node)]
        probabilities *= table[row, column]
    entries = [(1 << i, float(p)) for i, p in enumerate(probabilities) if p > 0]
    return MassFunction.from_focals(scope, entries)


def joint_distribution(net: BeliefNetwork, method: str = "auto") -> MassFunction:
    """Combination of every valuation extended to the full scope.

    ``method`` is ``product`` (probabilistic networks only, configuration-wise
    product of table entries), ``combination`` (Dempster's rule over the
    lowered valuations) or ``auto``.
    """
    net.scope.check_capacity()
    if method == "auto":
        method = "product" if net.mode is ValuationKind.PROBABILISTIC else "combination"
    if method == "product":
        if net.mode is not ValuationKind.PROBABILISTIC:
            raise InvalidModelError("product joint needs a probabilistic network")
        return _product_joint(net)
    if method != "combination":
        raise InvalidModelError(f"unknown joint method '{method}'")
    order = net.dag.topological_order()
    lowered = dict(zip((v.node for v in net.valuations), net.lowered))
    return combine_all([lowered[node].extend(net.scope) for node in order])


def pseudo_condition(bel: MassFunction, h: Scope) -> MassFunction:
    """Remove from ``bel`` its own marginal on ``h``"""
    if not h.issubset(bel.scope):
        raise ScopeMismatchError(f"{h} is not contained in {bel.scope}")
    return bel.decombine(bel.marginalize(h).extend(bel.scope))


def factorize_joint(joint: MassFunction, dag: Dag) -> List[NodeValuation]:
    """Estimate one valuation per node from a joint distribution.

    If recombining the valuations does not give the joint back, the dag is
    not an I-map of it; that is reported as a warning.
    """
    if set(joint.scope.names) != set(dag.nodes):
        raise ScopeMismatchError(
            f"joint over {joint.scope} does not match dag nodes {list(dag.nodes)}"
        )
    joint.scope.check_capacity()
    variables = {v.name: v for v in joint.scope}
    valuations = []
    for node in dag.topological_order():
        parents = dag.parents(node)
        family = joint.scope.restrict((node, *parents))
        conditional = pseudo_condition(
            joint.marginalize(family), joint.scope.restrict(parents)
        )
        valuations.append(NodeValuation.from_mass(node, conditional, variables))

    recombined = combine_all(
        [v.to_mass(variables).extend(joint.scope) for v in valuations]
    )
    if not recombined.allclose(joint.normalize()):
        logger.warning(
            "recombined valuations differ from the joint distribution; "
            "the dag is not an I-map of it"
        )
    return sorted(valuations, key=lambda v: v.node)
