"""Command-line interface."""
import argparse

from api.cli import cmd_estimate, cmd_eval, cmd_laplace, cmd_moments, cmd_sample, cmd_verify
from core import __version__

COMMANDS = (cmd_eval, cmd_moments, cmd_laplace, cmd_sample, cmd_estimate, cmd_verify)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qstat",
        description="q-Gaussian calculus with closed forms checked against quadrature",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser
