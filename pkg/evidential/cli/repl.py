import shlex
import sys
from typing import Optional, TextIO

from evidential.cli.commands import EXIT_OK, execute_command
from evidential.cli.session import Session
from evidential.core.exceptions import UsageError
from evidential.core.logging_config import get_logger

logger = get_logger(__name__)

PROMPT = "evidential> "
QUIT_COMMANDS = ("quit", "exit")


def repl_loop(
    session: Session,
    stdin: Optional[TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    """Read one command per line until ``quit`` or end of input.

    Errors are reported and the loop goes on; the prompt is shown only for
    terminals, so piped transcripts replay byte for byte.
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    prompt = PROMPT if stdin.isatty() else ""
    session.interactive = True
    try:
        while True:
            if prompt:
                stdout.write(prompt)
                stdout.flush()
            raw = stdin.readline()
            if not raw:
                return EXIT_OK
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                argv = shlex.split(line)
            except ValueError as e:
                stderr.write(UsageError(f"cannot split command line: {e}").render() + "\n")
                continue
            if argv[0] in QUIT_COMMANDS:
                return EXIT_OK
            result = execute_command(session, argv)
            stdout.write(result.stdout)
            stderr.write(result.stderr)
            stdout.flush()
    finally:
        session.interactive = False
        logger.debug("leaving the command loop")
