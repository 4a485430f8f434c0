"""Belief revision: the most plausible explanation of the findings.

Max-product propagation scores every focal set at the root; decoding walks
the argmax witnesses from the root outward and joins the chosen sets of all
nodes.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple, Union

from evidential.algebra.frames import iter_bits
from evidential.algebra.maxproduct import fold_max, fold_scores, is_tie, marginalize_max
from evidential.config.config import settings
from evidential.core.exceptions import CapacityError, InvalidModelError, TotalConflictError
from evidential.core.logging_config import get_logger
from evidential.jointree.construction import build_join_tree
from evidential.jointree.propagation import incoming, node_marginal, propagate
from evidential.jointree.queries import network_family
from evidential.jointree.tree import CombinationMode, JoinTree
from evidential.network.belief_network import BeliefNetwork
from evidential.network.evidence import EvidenceSet
from evidential.schemas.answers import Explanation

logger = get_logger(__name__)

Selection = Dict[int, int]


@dataclass(frozen=True)
class Explanatory:
    """Best instantiation of all variables, reported around ``variable``."""

    variable: str


@dataclass(frozen=True)
class Hypothesizing:
    """Best instantiation of the other variables once ``variable=value``."""

    variable: str
    value: str


@dataclass(frozen=True)
class Conditioning:
    """What will happen if the given findings hold."""

    evidence: EvidenceSet


RevisionMode = Union[Explanatory, Hypothesizing, Conditioning]


def _max_tree(net: BeliefNetwork, root: str, evidence: EvidenceSet) -> JoinTree:
    tree = build_join_tree(network_family(net, evidence), net.scope_of([root]))
    return propagate(tree, CombinationMode.MAX_PRODUCT)


class _Decoder:
    """Enumerates every tie-optimal choice of focal set per tree node."""

    def __init__(self, tree: JoinTree):
        self.tree = tree
        self.mailboxes = dict(tree.mailboxes)
        self.parents = tree.parent_map()
        self._folds: Dict[int, dict] = {}
        self._witnesses: Dict[int, dict] = {}

    def fold(self, node: int) -> dict:
        if node not in self._folds:
            factors = incoming(self.tree, self.mailboxes, node, self.parents[node])
            self._folds[node] = fold_max(self.tree.nodes[node].scope, factors)
        return self._folds[node]

    def children(self, node: int) -> List[int]:
        return [n for n in self.tree.neighbors(node) if n != self.parents[node]]

    def expand(self, node: int, mask: int) -> Iterator[Selection]:
        offset = len(self.tree.nodes[node].members)
        kids = self.children(node)
        for witness in self.fold(node)[mask][1]:
            options = []
            for position, kid in enumerate(kids):
                message_focal = witness[offset + position]
                options.append(list(self._preimages(kid, node, message_focal)))
            for combination in itertools.product(*options):
                selection = {node: mask}
                for part in combination:
                    selection.update(part)
                yield selection

    def _preimages(self, kid: int, node: int, focal: int) -> Iterator[Selection]:
        if kid not in self._witnesses:
            scores = fold_scores(
                self.tree.nodes[kid].scope,
                incoming(self.tree, self.mailboxes, kid, node),
            )
            self._witnesses[kid] = marginalize_max(
                scores, self.tree.separator(kid, node)
            )[1]
        witnesses = self._witnesses[kid]
        for preimage in witnesses.get(focal, ()):
            yield from self.expand(kid, preimage)

    def optimal(self) -> Tuple[float, List[Selection]]:
        root = self.tree.root
        scores = self.fold(root)
        if not scores:
            raise TotalConflictError("the findings have zero plausibility; no explanation exists")
        beta = max(v for v, _ in scores.values())
        selections: List[Selection] = []
        for mask in sorted(scores):
            if is_tie(scores[mask][0], beta):
                selections.extend(self.expand(root, mask))
        return beta, selections

    def join(self, selection: Selection) -> List[Dict[str, str]]:
        """Configurations over all variables lying in every chosen set"""
        partial: List[Dict[str, str]] = [{}]
        for node, _ in self.tree.breadth_first():
            scope = self.tree.nodes[node].scope
            members = [scope.configuration(i).as_dict() for i in iter_bits(selection[node])]
            partial = [
                {**known, **member}
                for known in partial
                for member in members
                if all(known.get(k, v) == v for k, v in member.items())
            ]
            if len(partial) > settings.CAPACITY:
                raise CapacityError("explanation set exceeds the configured capacity")
        return partial


def _ordering_key(net: BeliefNetwork, config: Dict[str, str]) -> Tuple[int, ...]:
    return tuple(net.variable(name).index(config[name]) for name in sorted(config))


def _clamp(net: BeliefNetwork, mode: Optional[RevisionMode], evidence: EvidenceSet):
    if mode is None:
        return evidence, None
    if isinstance(mode, Explanatory):
        net.variable(mode.variable)
        return evidence, mode.variable
    if isinstance(mode, Hypothesizing):
        net.variable(mode.variable).index(mode.value)
        return evidence.clamp(mode.variable, mode.value), mode.variable
    if isinstance(mode, Conditioning):
        return evidence.merge(mode.evidence), None
    raise InvalidModelError(f"unknown revision mode {mode!r}")


def revise(
    net: BeliefNetwork,
    mode: Optional[RevisionMode] = None,
    evidence: Optional[EvidenceSet] = None,
) -> Explanation:
    evidence, target = _clamp(net, mode, evidence or EvidenceSet())
    evidence.validate(net)
    root = target or next(iter(evidence.assignments), net.names[0])
    decoder = _Decoder(_max_tree(net, root, evidence))
    beta, selections = decoder.optimal()

    clamped = evidence.points()
    free = [name for name in net.names if name not in clamped]
    candidates = []
    for selection in selections:
        restricted = {
            tuple(config[name] for name in free): {name: config[name] for name in free}
            for config in decoder.join(selection)
        }
        members = sorted(restricted.values(), key=lambda c: _ordering_key(net, c))
        candidates.append(members)
    candidates.sort(key=lambda members: [_ordering_key(net, c) for c in members])
    best = candidates[0]

    ties: List[Dict[str, str]] = []
    if all(len(members) == 1 for members in candidates):
        seen = set()
        for members in candidates:
            key = _ordering_key(net, members[0])
            if key not in seen:
                seen.add(key)
                ties.append(members[0])

    explanation = Explanation(
        assignment=best[0] if len(best) == 1 else None,
        configurations=best,
        score=beta,
        evidence=clamped,
        ties=ties,
        target=target if isinstance(mode, Explanatory) else None,
        max_marginal=(
            max_marginal(net, target, evidence) if isinstance(mode, Explanatory) else None
        ),
    )
    logger.info(f"revision found score {beta:.12g} with {len(ties) or 1} optimal choice(s)")
    return explanation


def max_marginal(
    net: BeliefNetwork, name: str, evidence: Optional[EvidenceSet] = None
) -> Dict[str, float]:
    """Best score attainable with each value of ``name``"""
    variable = net.variable(name)
    tree = _max_tree(net, name, evidence or EvidenceSet())
    projected, _ = marginalize_max(node_marginal(tree, tree.root), net.scope_of([name]))
    return {
        value: max((v for a, v in projected.focals if a >> index & 1), default=0.0)
        for index, value in enumerate(variable.domain)
    }
