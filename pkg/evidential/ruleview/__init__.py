from evidential.ruleview.beams import (
    RuleBeam,
    RuleGroup,
    RuleLine,
    parse_rule_beam,
    render_rule_beam,
)
from evidential.ruleview.compiler import QueryCompiler, compile_query_node
from evidential.ruleview.grammar import parse_query
from evidential.ruleview.queries import (
    evaluate_expression_query,
    event_answer,
    infer_rule_beam,
    validate_rule_query,
)

__all__ = [
    "QueryCompiler",
    "RuleBeam",
    "RuleGroup",
    "RuleLine",
    "compile_query_node",
    "evaluate_expression_query",
    "event_answer",
    "infer_rule_beam",
    "parse_query",
    "parse_rule_beam",
    "render_rule_beam",
    "validate_rule_query",
]
