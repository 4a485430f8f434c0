"""Subcommands of the ``evidential`` program.

The same parser serves argv and every REPL line. Handlers return the text to
print; errors propagate as ``EvidentialError`` and become one ``CODE: message``
line with exit status 1, or 2 for usage errors.
"""

import argparse
import io
import json
from contextlib import redirect_stdout
from dataclasses import dataclass
from typing import Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

from evidential.algebra.frames import render_set
from evidential.cli.session import Session
from evidential.config.config import settings
from evidential.core.exceptions import EvidentialError, UsageError
from evidential.core.logging_config import get_logger, set_level
from evidential.models.query import Expression, RuleQuery
from evidential.network.valuation import ValuationKind
from evidential.ruleview.grammar import parse_query
from evidential.utils.formatting import format_real

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class _ParserExit(Exception):
    def __init__(self, status: int):
        super().__init__(status)
        self.status = status


class CommandParser(argparse.ArgumentParser):
    """An argument parser that raises instead of exiting the process"""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)

    def exit(self, status: int = 0, message: Optional[str] = None) -> NoReturn:
        if message:
            raise UsageError(message.strip())
        raise _ParserExit(status)


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    stdout: str = ""
    stderr: str = ""
    start_repl: bool = False


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog="evidential",
        description="Reason with probabilistic and Dempster-Shafer belief networks",
    )
    parser.add_argument("--net", help="Network document to load first")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    commands = parser.add_subparsers(dest="command", metavar="command")

    load = commands.add_parser("load", help="Load a network document")
    load.add_argument("path")
    save = commands.add_parser("save", help="Save the current network")
    save.add_argument("path")

    rules = commands.add_parser("show-rules", help="Print the rule beam of a node")
    rules.add_argument("node")

    marginal = commands.add_parser("marginal", help="Posterior of one variable")
    marginal.add_argument("variable")
    marginal.add_argument("--given", help="Findings as a logical expression")

    query = commands.add_parser("query", help="Probability of a logical expression")
    query.add_argument("expression")
    query.add_argument("--given", help="Condition as a logical expression")

    rule = commands.add_parser("validate-rule", help="Three-valued validity of a rule")
    rule.add_argument("rule")
    rule.add_argument("--given", help="Findings as a logical expression")

    mpe = commands.add_parser("mpe", help="Most probable explanation")
    mpe.add_argument("--given", help="Findings as a logical expression")
    mode = mpe.add_mutually_exclusive_group()
    mode.add_argument("--hypothesize", metavar="VAR=VALUE", help="Clamp one variable")
    mode.add_argument("--explain", metavar="VAR", help="Also report max-marginals of VAR")
    mpe.add_argument(
        "--posterior", action="store_true", help="Also print score / P(findings)"
    )

    dsep = commands.add_parser("dsep", help="Test d-separation of J and K given L")
    for name in ("J", "K", "L"):
        dsep.add_argument(name, help="Comma-separated nodes, '-' for none")

    estimate = commands.add_parser("estimate", help="Estimate tables from records")
    estimate.add_argument("--data", required=True, help="CSV records")
    estimate.add_argument("--dag", required=True, help="Document with the structure")
    estimate.add_argument("--smoothing", type=float, default=0.0)
    estimate.add_argument("--out", required=True, help="Where to write the network")

    tree = commands.add_parser("show-tree", help="Print the join tree")
    tree.add_argument("--root", help="Variable the root node must contain")

    infer = commands.add_parser("infer-beam", help="Infer a rule beam by propagation")
    infer.add_argument("node")
    infer.add_argument("--premise", required=True, help="Comma-separated premise nodes")
    infer.add_argument("--given", help="Condition as a logical expression")

    commands.add_parser("metrics", help="Command counts and timings")
    commands.add_parser("repl", help="Read commands from standard input")
    return parser


def _expression(text: Optional[str], option: str = "--given") -> Optional[Expression]:
    if text is None:
        return None
    ast = parse_query(text)
    if isinstance(ast, RuleQuery):
        raise UsageError(f"{option} takes an expression, not a rule")
    return ast


def _node_list(text: str) -> List[str]:
    if text.strip() == "-":
        return []
    return [name.strip() for name in text.split(",") if name.strip()]


def _assignment(text: str) -> Tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip() or not value.strip():
        raise UsageError(f"expected VAR=VALUE, got '{text}'")
    return name.strip(), value.strip().strip("'")


def _load(session: Session, args) -> str:
    session.service.load(args.path)
    return ""


def _save(session: Session, args) -> str:
    session.service.save(args.path)
    return ""


def _show_rules(session: Session, args) -> str:
    beam = session.service.rule_beam(args.node)
    return beam.to_text(session.digits or settings.SIGNIFICANT_DIGITS).rstrip("\n")


def _marginal(session: Session, args) -> str:
    marginal = session.service.marginal(args.variable, _expression(args.given))
    variable = marginal.scope.variables[0]
    digits = session.digits
    if session.network.mode is ValuationKind.PROBABILISTIC:
        return "\n".join(
            f"P({variable.name}={value}) = {format_real(marginal.mass(1 << i), digits)}"
            for i, value in enumerate(variable.domain)
        )
    lines = [
        f"m({render_set(marginal.scope, mask)}) = {format_real(m, digits)}"
        for mask, m in marginal.focals
    ]
    for i, value in enumerate(variable.domain):
        lines.append(
            f"Bel({variable.name}={value}) = {format_real(marginal.belief(1 << i), digits)} "
            f"Pl({variable.name}={value}) = {format_real(marginal.plausibility(1 << i), digits)}"
        )
    return "\n".join(lines)


def _query(session: Session, args) -> str:
    expr = _expression(args.expression, "query")
    return session.service.query(expr, _expression(args.given)).render(session.digits)


def _validate_rule(session: Session, args) -> str:
    rule = parse_query(args.rule)
    if not isinstance(rule, RuleQuery):
        raise UsageError("validate-rule takes 'IF <expression> THEN <atom>'")
    answer = session.service.validate_rule(rule, _expression(args.given))
    return answer.render(session.digits)


def _mpe(session: Session, args) -> str:
    given = _expression(args.given)
    hypothesis = _assignment(args.hypothesize) if args.hypothesize else None
    explanation = session.service.explain(given, hypothesis, args.explain)
    lines = [explanation.render(session.digits)]
    if explanation.max_marginal is not None:
        for value, score in explanation.max_marginal.items():
            lines.append(
                f"beta({explanation.target}={value}) = {format_real(score, session.digits)}"
            )
    if args.posterior:
        posterior = session.service.posterior(explanation, given)
        lines.append(f"posterior={format_real(posterior, session.digits)}")
    return "\n".join(lines)


def _dsep(session: Session, args) -> str:
    separated = session.service.d_separated(
        _node_list(args.J), _node_list(args.K), _node_list(args.L)
    )
    return f"d-separated: {'true' if separated else 'false'}"


def _estimate(session: Session, args) -> str:
    if args.smoothing < 0:
        raise UsageError("--smoothing must not be negative")
    session.service.estimate(args.data, args.dag, args.out, args.smoothing)
    return ""


def _show_tree(session: Session, args) -> str:
    return session.service.join_tree(args.root).dump()


def _infer_beam(session: Session, args) -> str:
    beam = session.service.infer_beam(
        args.node, _node_list(args.premise), _expression(args.given)
    )
    return beam.to_text(session.digits or settings.SIGNIFICANT_DIGITS).rstrip("\n")


def _metrics(session: Session, args) -> str:
    return json.dumps(session.service.metrics(), indent=2, sort_keys=True, default=str)


HANDLERS: Dict[str, Callable[[Session, argparse.Namespace], str]] = {
    "load": _load,
    "save": _save,
    "show-rules": _show_rules,
    "marginal": _marginal,
    "query": _query,
    "validate-rule": _validate_rule,
    "mpe": _mpe,
    "dsep": _dsep,
    "estimate": _estimate,
    "show-tree": _show_tree,
    "infer-beam": _infer_beam,
    "metrics": _metrics,
}


def execute_command(session: Session, argv: Sequence[str]) -> CommandResult:
    """Run one command line against ``session`` and collect its output.

    ``-v`` raises the log level for this command only, or for the whole loop
    when the command starts one.
    """
    captured = io.StringIO()
    previous_level = None
    keep_level = False
    try:
        with redirect_stdout(captured):
            try:
                args = build_parser().parse_args(list(argv))
            except _ParserExit as e:
                return CommandResult(e.status, captured.getvalue())
        if args.verbose:
            previous_level = set_level("INFO")
        if args.net:
            session.service.load(args.net)
        if args.command in (None, "repl"):
            if session.interactive:
                raise UsageError("already reading commands interactively")
            keep_level = True
            return CommandResult(EXIT_OK, start_repl=True)
        text = HANDLERS[args.command](session, args)
    except EvidentialError as e:
        code = EXIT_USAGE if isinstance(e, UsageError) else EXIT_FAILURE
        return CommandResult(code, stderr=e.render() + "\n")
    finally:
        if previous_level is not None and not keep_level:
            set_level(previous_level)
    return CommandResult(EXIT_OK, text + "\n" if text else "")
