"""sample: seeded draws from N_q(m, sigma2), one per line."""
import argparse

import numpy as np

from api.cli.arguments import add_format_argument, add_params_arguments, params_from
from api.cli.output import number, write_json
from api.schemas.commands import SampleResult
from core.config import settings
from services.qgaussian import sample


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("sample", help="Draw reproducible samples")
    add_params_arguments(parser)
    parser.add_argument("--n", type=int, required=True, help="Number of draws")
    parser.add_argument(
        "--seed", type=int, default=None, help="Random seed (default: QSTAT_SEED or settings)"
    )
    add_format_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> None:
    p = params_from(args)
    seed = settings.seed if args.seed is None else args.seed
    values = sample(p, np.random.default_rng(seed), args.n)
    if args.format == "json":
        write_json(SampleResult(params=p, seed=seed, values=values.tolist()))
        return
    for value in values:
        print(number(float(value)))
