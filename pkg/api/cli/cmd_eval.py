"""eval: density, CDF or quantile of N_q(m, sigma2) at one point."""
import argparse

from api.cli.arguments import add_format_argument, add_params_arguments, params_from
from api.cli.output import number, write_json
from api.schemas.commands import EvalResult
from services.qgaussian import cdf, pdf, quantile


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("eval", help="Evaluate the pdf, cdf or quantile")
    add_params_arguments(parser)
    parser.add_argument(
        "--x", type=float, required=True, help="Point (probability level for --what quantile)"
    )
    parser.add_argument("--what", choices=("pdf", "cdf", "quantile"), default="pdf")
    add_format_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> None:
    p = params_from(args)
    evaluate = {"pdf": pdf, "cdf": cdf, "quantile": quantile}[args.what]
    value = float(evaluate(p, args.x))
    if args.format == "json":
        write_json(EvalResult(params=p, what=args.what, x=args.x, value=value))
    else:
        print(number(value))
