"""qstat command-line entry point."""
import logging
import sys
from typing import Optional, Sequence

from api.cli import build_parser
from core.config import settings
from core.exceptions import QStatError

logger = logging.getLogger(__name__)

VERBOSITY = {1: logging.INFO, 2: logging.DEBUG}


def configure_logging(verbose: int) -> None:
    level = VERBOSITY.get(min(verbose, 2), settings.log_level.upper())
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, dispatch to the selected command and return the exit code.

    0 on success, 1 when verify reports a FAIL, 2 for invalid input, 3 when a
    numerical oracle fails to converge.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    logger.debug(f"command {args.command} with {vars(args)}")
    try:
        args.handler(args)
    except QStatError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(run())
