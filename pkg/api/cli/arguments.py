"""Arguments shared by several commands."""
import argparse
from typing import Sequence

from api.cli.output import FORMATS
from models.domain import QGaussianParams
from services.qgaussian import make_params


def add_params_arguments(parser: argparse.ArgumentParser) -> None:
    """--q, --m and --sigma2 of N_q(m, sigma2)."""
    parser.add_argument("--q", type=float, required=True, help="Deformation parameter, q < 3")
    parser.add_argument("--m", type=float, default=0.0, help="Location (default 0)")
    parser.add_argument("--sigma2", type=float, default=1.0, help="Scale, > 0 (default 1)")


def add_format_argument(parser: argparse.ArgumentParser, choices: Sequence[str] = FORMATS) -> None:
    parser.add_argument("--format", choices=choices, default="text", help="Output format")


def params_from(args: argparse.Namespace) -> QGaussianParams:
    return make_params(args.q, args.m, args.sigma2)
