"""laplace: the q-Laplace transform of N_q(m, sigma2) at theta."""
import argparse

from api.cli.arguments import add_format_argument, add_params_arguments, params_from
from api.cli.output import number, write_json
from api.schemas.commands import LaplaceResult
from core.exceptions import DivergenceError
from services.qlaplace import laplace_closed, laplace_oracle


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("laplace", help="Evaluate the q-Laplace transform, 1 <= q < 3")
    add_params_arguments(parser)
    parser.add_argument("--theta", type=float, required=True)
    parser.add_argument("--method", choices=("closed", "oracle"), default="closed")
    parser.add_argument(
        "--variant",
        choices=("plus", "minus"),
        default=None,
        help="Sign of the theta^2 term of the closed form (default: the certified one)",
    )
    add_format_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> None:
    p = params_from(args)
    if args.method == "oracle":
        evaluation = laplace_oracle(p, args.theta)
        if not evaluation.converged:
            raise DivergenceError(
                f"q-Laplace transform at theta={args.theta:g}", evaluation.error_estimate
            )
    else:
        evaluation = laplace_closed(p, args.theta, args.variant)
    if args.format == "json":
        write_json(LaplaceResult(params=p, evaluation=evaluation))
    else:
        print(number(evaluation.value))
