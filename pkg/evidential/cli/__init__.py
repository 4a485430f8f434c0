from evidential.cli.commands import CommandResult, build_parser, execute_command
from evidential.cli.repl import repl_loop
from evidential.cli.session import Session

__all__ = ["CommandResult", "Session", "build_parser", "execute_command", "repl_loop"]
