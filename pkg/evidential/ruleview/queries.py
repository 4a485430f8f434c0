import itertools
from math import fsum
from typing import List, Optional, Sequence

from evidential.algebra.mass import MassFunction
from evidential.config.config import settings
from evidential.core.exceptions import InvalidModelError, TotalConflictError
from evidential.core.logging_config import get_logger
from evidential.jointree.queries import query_marginal
from evidential.models.query import Expression, RuleQuery
from evidential.network.belief_network import BeliefNetwork
from evidential.network.evidence import EvidenceSet
from evidential.network.valuation import ValuationKind
from evidential.ruleview.beams import RuleBeam, RuleGroup, RuleLine
from evidential.ruleview.compiler import RULE_DOMAIN, QueryCompiler
from evidential.schemas.answers import EventAnswer, ThreeValuedAnswer

logger = get_logger(__name__)


def evaluate_expression_query(
    net: BeliefNetwork, expr: Expression, given: Optional[Expression] = None
) -> MassFunction:
    """Marginal over {t, n} of the node standing for ``expr``.

    With ``given``, the condition is compiled too and its node clamped to
    ``t``; a condition of zero plausibility raises ``TotalConflictError``.
    """
    if isinstance(expr, RuleQuery):
        raise InvalidModelError("rule queries are answered by validate_rule_query")
    compiler = QueryCompiler(net)
    event = compiler.expression_node(expr)
    evidence = None
    if given is not None:
        evidence = EvidenceSet.of({compiler.expression_node(given): "t"})
    return query_marginal(compiler.amended(), event, evidence)


def event_answer(net: BeliefNetwork, marginal: MassFunction) -> EventAnswer:
    true = 1 << marginal.scope.variables[0].index("t")
    return EventAnswer(
        belief=marginal.belief(true),
        plausibility=marginal.plausibility(true),
        probabilistic=net.mode is ValuationKind.PROBABILISTIC,
    )


def validate_rule_query(
    net: BeliefNetwork, rule: RuleQuery, evidence: Optional[EvidenceSet] = None
) -> ThreeValuedAnswer:
    """Probability that the rule fires correctly, wrongly or not at all.

    Ds networks get pignistic point values plus (belief, plausibility)
    intervals per outcome.
    """
    compiler = QueryCompiler(net)
    node = compiler.rule_node(rule)
    marginal = query_marginal(compiler.amended(), node, evidence)
    points = marginal.pignistic()
    values = [max(points.get(i, 0.0), 0.0) for i in range(len(RULE_DOMAIN))]
    total = fsum(values)
    if total <= settings.CONFLICT_THRESHOLD:
        raise TotalConflictError(f"rule {rule} has no probability mass left to validate")
    values = [v / total for v in values]
    intervals = None
    if net.mode is ValuationKind.DS:
        intervals = {
            label: (marginal.belief(1 << i), marginal.plausibility(1 << i))
            for i, label in enumerate(RULE_DOMAIN)
        }
    return ThreeValuedAnswer(pT=values[0], pN=values[1], pQ=values[2], intervals=intervals)


def infer_rule_beam(
    net: BeliefNetwork,
    conclusion: str,
    premise: Sequence[str],
    given: Optional[Expression] = None,
) -> RuleBeam:
    """Conditional table of ``conclusion`` given ``premise`` as a rule beam.

    Premise configurations that are impossible under ``given`` are left out.
    """
    if net.mode is not ValuationKind.PROBABILISTIC:
        raise InvalidModelError("rule beams can only be inferred from probabilistic networks")
    premise = tuple(sorted(set(premise)))
    if conclusion in premise:
        raise InvalidModelError(f"{conclusion} cannot be both premise and conclusion")
    target = net.variable(conclusion)
    base = EvidenceSet.of(constraints=[given] if given is not None else [])

    groups: List[RuleGroup] = []
    for key in itertools.product(*(net.variable(name).domain for name in premise)):
        findings = base.merge(EvidenceSet.of(dict(zip(premise, key))))
        try:
            marginal = query_marginal(net, conclusion, findings)
        except TotalConflictError:
            logger.info(f"premise {dict(zip(premise, key))} is impossible; no rules emitted")
            continue
        for index, value in enumerate(target.domain):
            line = RuleLine(tuple(zip(premise, key)), (conclusion, value))
            groups.append(RuleGroup((line,), marginal.mass(1 << index)))
    return RuleBeam(conclusion, premise, ValuationKind.PROBABILISTIC, tuple(groups))
