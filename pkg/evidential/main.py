import sys
from typing import List, Optional

from evidential.cli.commands import execute_command
from evidential.cli.repl import repl_loop
from evidential.cli.session import Session


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    session = Session()
    with session.service:
        result = execute_command(session, argv)
        sys.stdout.write(result.stdout)
        sys.stderr.write(result.stderr)
        if result.start_repl:
            return repl_loop(session)
        return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
