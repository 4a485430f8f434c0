"""Message passing on a join tree.

A message from node H to its neighbour H' combines the local valuation of H
with every message H received from its other neighbours and projects the
result onto the separator. The mode picks the operators: Dempster's rule and
summing projection, or max-product and max projection.
"""

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Optional, Sequence

from evidential.algebra.mass import MassFunction
from evidential.algebra.maxproduct import fold_scores, marginalize_max
from evidential.config.config import settings
from evidential.core.exceptions import PropagationError
from evidential.core.logging_config import get_logger
from evidential.jointree.tree import CombinationMode, Edge, JoinTree

logger = get_logger(__name__)


def incoming(
    tree: JoinTree,
    mailboxes: Dict[Edge, MassFunction],
    node: int,
    exclude: Optional[int] = None,
) -> list:
    """Attached inputs of ``node`` followed by the messages it received"""
    factors = list(tree.nodes[node].members)
    for neighbor in tree.neighbors(node):
        if neighbor == exclude:
            continue
        if (neighbor, node) not in mailboxes:
            raise PropagationError(f"mailbox {neighbor}->{node} is empty")
        factors.append(mailboxes[(neighbor, node)])
    return factors


def combine_at(
    tree: JoinTree,
    mode: CombinationMode,
    mailboxes: Dict[Edge, MassFunction],
    node: int,
    exclude: Optional[int] = None,
) -> MassFunction:
    scope = tree.nodes[node].scope
    factors = incoming(tree, mailboxes, node, exclude)
    if mode is CombinationMode.MAX_PRODUCT:
        return fold_scores(scope, factors)
    combined = MassFunction.vacuous(scope)
    for factor in factors:
        combined = combined.combine(factor.extend(scope))
    return combined


def compute_message(
    tree: JoinTree,
    mode: CombinationMode,
    mailboxes: Dict[Edge, MassFunction],
    source: int,
    target: int,
) -> MassFunction:
    combined = combine_at(tree, mode, mailboxes, source, exclude=target)
    separator = tree.separator(source, target)
    if mode is CombinationMode.MAX_PRODUCT:
        return marginalize_max(combined, separator)[0]
    return combined.marginalize(separator)


def _validate_schedule(tree: JoinTree, schedule: Sequence[Edge]) -> None:
    expected = set(tree.directed_edges())
    given = [tuple(edge) for edge in schedule]
    if len(given) != len(expected) or set(given) != expected:
        raise PropagationError("schedule must list every directed tree edge once")
    done = set()
    for source, target in given:
        if (source, target) not in tree.ready(done):
            raise PropagationError(
                f"message {source}->{target} scheduled before its inputs"
            )
        done.add((source, target))


def propagate(
    tree: JoinTree,
    mode: CombinationMode,
    schedule: Optional[Sequence[Edge]] = None,
) -> JoinTree:
    """Fill every mailbox; returns a new tree, ``tree`` is not modified"""
    mode = CombinationMode(mode)
    mailboxes: Dict[Edge, MassFunction] = {}
    workers = settings.PROPAGATION_WORKERS

    if schedule is None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            wave = tree.ready(mailboxes)
            while wave:
                results = pool.map(
                    lambda edge: compute_message(tree, mode, mailboxes, *edge), wave
                )
                mailboxes.update(zip(wave, list(results)))
                wave = tree.ready(mailboxes)
    else:
        if schedule is None:
            schedule = tree.default_schedule()
        else:
            _validate_schedule(tree, schedule)
        for source, target in schedule:
            mailboxes[(source, target)] = compute_message(
                tree, mode, mailboxes, source, target
            )

    logger.debug(f"{mode.value} propagation filled {len(mailboxes)} mailbox(es)")
    return dataclasses.replace(tree, mode=mode, mailboxes=mailboxes)


def node_marginal(tree: JoinTree, node: int) -> MassFunction:
    """Local valuation fused with all incoming messages"""
    if tree.mode is None:
        raise PropagationError("mailboxes not filled; propagate first")
    combined = combine_at(tree, tree.mode, dict(tree.mailboxes), node)
    if tree.mode is CombinationMode.SUM_PRODUCT:
        return combined.normalize()
    return combined
