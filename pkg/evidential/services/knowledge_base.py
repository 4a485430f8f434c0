import time
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple, Union

from evidential.algebra.mass import MassFunction
from evidential.core.exceptions import EvidentialError, InvalidModelError, UsageError
from evidential.core.logging_config import get_logger
from evidential.core.monitoring import MonitoringService
from evidential.io.documents import load_network, load_structure, save_network
from evidential.io.estimation import estimate_valuations
from evidential.io.records import load_records
from evidential.jointree.construction import build_join_tree
from evidential.jointree.queries import network_family, query_marginal
from evidential.jointree.tree import JoinTree
from evidential.models.query import Expression, RuleQuery, conjunction_atoms
from evidential.network.belief_network import BeliefNetwork, build_network
from evidential.network.dseparation import d_separated
from evidential.network.evidence import EvidenceSet
from evidential.network.valuation import ValuationKind
from evidential.revision.explanation import Explanatory, Hypothesizing, revise
from evidential.ruleview.beams import RuleBeam, render_rule_beam
from evidential.ruleview.queries import (
    evaluate_expression_query,
    event_answer,
    infer_rule_beam,
    validate_rule_query,
)
from evidential.schemas.answers import EventAnswer, Explanation, ThreeValuedAnswer
from evidential.services.base_service import BaseService

logger = get_logger(__name__)

PathLike = Union[str, Path]


def evidence_from_expression(expr: Optional[Expression]) -> EvidenceSet:
    """A conjunction of atoms becomes point findings; anything else a constraint"""
    if expr is None:
        return EvidenceSet()
    atoms = conjunction_atoms(expr)
    if atoms is None:
        return EvidenceSet.of(constraints=[expr])
    evidence = EvidenceSet()
    for atom in atoms:
        evidence = evidence.clamp(atom.variable, atom.value)
    return evidence


class KnowledgeBaseService(BaseService):
    """Operations on the current belief network of a session.

    Every operation leaves ``network`` untouched; query nodes live only in
    the amended copies built while answering.
    """

    def __init__(self, network: Optional[BeliefNetwork] = None):
        super().__init__()
        self.network = network
        self.monitoring = MonitoringService()

    def initialize(self) -> None:
        """Initialize monitoring"""
        logger.debug("Initializing KnowledgeBaseService")
        self.monitoring.initialize()

    def cleanup(self) -> None:
        """Clean up resources"""
        logger.debug("Cleaning up KnowledgeBaseService")
        self.monitoring.cleanup()

    @contextmanager
    def _tracked(self, operation: str) -> Iterator[None]:
        start_time = time.time()
        try:
            yield
        except EvidentialError as e:
            self.monitoring.track_error(e)
            raise
        except Exception as e:
            self.monitoring.track_error(e)
            logger.error(f"Error in {operation}: {str(e)}")
            raise
        self.monitoring.track_request(operation, time.time() - start_time)

    def require_network(self) -> BeliefNetwork:
        if self.network is None:
            raise UsageError("no network loaded; use 'load <path>' or --net")
        return self.network

    def load(self, path: PathLike) -> BeliefNetwork:
        with self._tracked("load"):
            self.network = load_network(path)
            return self.network

    def save(self, path: PathLike) -> None:
        with self._tracked("save"):
            save_network(self.require_network(), path)

    def rule_beam(self, node: str) -> RuleBeam:
        with self._tracked("show-rules"):
            net = self.require_network()
            net.variable(node)
            return render_rule_beam(net, node)

    def marginal(self, name: str, given: Optional[Expression] = None) -> MassFunction:
        with self._tracked("marginal"):
            net = self.require_network()
            return query_marginal(net, name, evidence_from_expression(given))

    def query(
        self, expr: Expression, given: Optional[Expression] = None
    ) -> EventAnswer:
        with self._tracked("query"):
            net = self.require_network()
            return event_answer(net, evaluate_expression_query(net, expr, given))

    def validate_rule(
        self, rule: RuleQuery, given: Optional[Expression] = None
    ) -> ThreeValuedAnswer:
        with self._tracked("validate-rule"):
            net = self.require_network()
            evidence = evidence_from_expression(given) if given is not None else None
            return validate_rule_query(net, rule, evidence)

    def explain(
        self,
        given: Optional[Expression] = None,
        hypothesize: Optional[Tuple[str, str]] = None,
        explain: Optional[str] = None,
    ) -> Explanation:
        with self._tracked("mpe"):
            net = self.require_network()
            if hypothesize is not None and explain is not None:
                raise UsageError("--hypothesize and --explain are mutually exclusive")
            mode = None
            if hypothesize is not None:
                mode = Hypothesizing(*hypothesize)
            elif explain is not None:
                mode = Explanatory(explain)
            return revise(net, mode, evidence_from_expression(given))

    def posterior(self, explanation: Explanation, given: Optional[Expression]) -> float:
        """Score of an explanation divided by the probability of the findings"""
        with self._tracked("posterior"):
            net = self.require_network()
            if net.mode is not ValuationKind.PROBABILISTIC:
                raise InvalidModelError("posteriors need a probabilistic network")
            evidence = evidence_from_expression(given)
            findings = evidence.as_expression()
            if findings is None:
                return explanation.score
            marginal = evaluate_expression_query(net, findings)
            return explanation.score / event_answer(net, marginal).belief

    def d_separated(
        self, first: Sequence[str], second: Sequence[str], given: Sequence[str]
    ) -> bool:
        with self._tracked("dsep"):
            return d_separated(self.require_network().dag, first, second, given)

    def join_tree(self, root: Optional[str] = None) -> JoinTree:
        with self._tracked("show-tree"):
            net = self.require_network()
            return build_join_tree(
                network_family(net), net.scope_of([root or net.names[0]])
            )

    def infer_beam(
        self, node: str, premise: Sequence[str], given: Optional[Expression] = None
    ) -> RuleBeam:
        with self._tracked("infer-beam"):
            return infer_rule_beam(self.require_network(), node, premise, given)

    def estimate(
        self,
        data: PathLike,
        structure: PathLike,
        out: PathLike,
        smoothing: float = 0.0,
    ) -> BeliefNetwork:
        with self._tracked("estimate"):
            variables, dag = load_structure(structure)
            records = load_records(data, variables)
            valuations = estimate_valuations(dag, records, smoothing, variables)
            net = build_network(variables, dag, valuations)
            save_network(net, out)
            return net

    def metrics(self) -> Dict[str, Any]:
        return self.monitoring.get_metrics()
