"""pyparsing grammars for logical queries and rule-beam lines.

Keywords are case-insensitive; ``.and.``, ``.or.`` and ``.not.`` are accepted
as synonyms of the bare keywords. Atoms are ``name='value'``.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import pyparsing as pp

from evidential.core.exceptions import ParseError
from evidential.models.query import And, Atom, Not, Or, QueryAst, RuleQuery

pp.ParserElement.enable_packrat()

IF, THEN, AND, OR, NOT, WITH = (
    pp.CaselessKeyword(word) for word in ("if", "then", "and", "or", "not", "with")
)
BEAM = pp.CaselessKeyword("beam")
KIND = pp.CaselessKeyword("probabilistic") | pp.CaselessKeyword("ds")

AND_OP = AND | pp.CaselessLiteral(".and.")
OR_OP = OR | pp.CaselessLiteral(".or.")
NOT_OP = NOT | pp.CaselessLiteral(".not.")

RESERVED = IF | THEN | AND | OR | NOT | WITH
IDENTIFIER = ~RESERVED + pp.Word(pp.alphas + "_", pp.alphanums + "_")
VALUE = pp.QuotedString("'", esc_char="\\")
ATOM = (IDENTIFIER + pp.Suppress("=") + VALUE).set_parse_action(
    lambda tokens: Atom(tokens[0], tokens[1])
)


def _negate(tokens):
    group = tokens[0]
    operand = group[-1]
    for _ in range(len(group) - 1):
        operand = Not(operand)
    return operand


def _conjoin(tokens):
    return And(tuple(tokens[0][0::2]))


def _disjoin(tokens):
    return Or(tuple(tokens[0][0::2]))


EXPRESSION = pp.infix_notation(
    ATOM,
    [
        (NOT_OP, 1, pp.OpAssoc.RIGHT, _negate),
        (AND_OP, 2, pp.OpAssoc.LEFT, _conjoin),
        (OR_OP, 2, pp.OpAssoc.LEFT, _disjoin),
    ],
)
RULE = (IF.suppress() + EXPRESSION + THEN.suppress() + ATOM).set_parse_action(
    lambda tokens: RuleQuery(tokens[0], tokens[1])
)
QUERY = RULE | EXPRESSION

NUMBER = pp.pyparsing_common.fnumber
PREMISE = IF.suppress() + ATOM + pp.ZeroOrMore(AND.suppress() + ATOM)
BEAM_LINE = (
    pp.Opt(AND)("continued")
    + pp.Group(pp.Opt(PREMISE))("premise")
    + THEN.suppress()
    + ATOM("conclusion")
    + pp.Opt(WITH.suppress() + NUMBER("weight"))
)
BEAM_HEADER = BEAM.suppress() + IDENTIFIER("node") + KIND("kind")


@dataclass(frozen=True)
class BeamLineRecord:
    continued: bool
    premise: Tuple[Atom, ...]
    conclusion: Atom
    weight: Optional[float]


def parse_query(text: str) -> QueryAst:
    """Parse a logical expression or an IF-THEN rule query"""
    if not text or not text.strip():
        raise ParseError("empty query", position=0)
    try:
        return QUERY.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as e:
        raise ParseError(f"syntax error: {e.msg}", position=e.loc) from None


def parse_beam_line(text: str, line: int) -> BeamLineRecord:
    try:
        tokens = BEAM_LINE.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise ParseError(f"malformed rule line: {e.msg}", line=line) from None
    return BeamLineRecord(
        continued=bool(tokens.get("continued")),
        premise=tuple(tokens["premise"]),
        conclusion=tokens["conclusion"],
        weight=float(tokens["weight"]) if "weight" in tokens else None,
    )


def parse_beam_header(text: str) -> Optional[Tuple[str, str]]:
    """(node, kind) of a ``BEAM`` header line, or None for other lines"""
    try:
        tokens = BEAM_HEADER.parse_string(text, parse_all=True)
    except pp.ParseBaseException:
        return None
    node, kind = tokens
    return str(node), str(kind).lower()
