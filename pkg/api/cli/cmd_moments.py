"""moments: closed form of a moment next to its quadrature."""
import argparse
from typing import Optional

from api.cli.arguments import add_format_argument, add_params_arguments, params_from
from api.cli.output import write_fields, write_json
from api.schemas.commands import MomentResult
from core.exceptions import DivergenceError, FormulaWindowError
from services.moments import default_power, moment_closed_form, moment_oracle, moment_report


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "moments", help="Compare a moment's closed form with the quadrature oracle"
    )
    add_params_arguments(parser)
    parser.add_argument("--order", type=int, required=True, help="Moment order n >= 0")
    parser.add_argument(
        "--kind", choices=("raw", "central", "unnormalized", "normalized"), default="raw"
    )
    parser.add_argument(
        "--power",
        type=float,
        default=None,
        help="Density power of q-moments (default: the power of the matching closed form)",
    )
    add_format_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> None:
    """Print the moment report.

    Raises:
        DivergenceError: the oracle did not converge, which means the moment is infinite
        or out of reach of the quadrature.
    """
    p = params_from(args)
    power = default_power(p.q, args.order, args.kind) if args.power is None else args.power
    try:
        closed: Optional[float] = moment_closed_form(p, args.order, args.kind, power)
    except FormulaWindowError:
        closed = None
    oracle = moment_oracle(p, args.order, args.kind, power)
    if not oracle.converged:
        raise DivergenceError(f"{args.kind} moment of order {args.order} at q={p.q:g}")
    report = moment_report(f"{args.kind}-{args.order}", closed, oracle, scale=p.sigma**args.order)
    if args.format == "json":
        write_json(
            MomentResult(
                params=p, order=args.order, kind=args.kind, power=power, report=report
            )
        )
        return
    write_fields(
        [
            ("closed_form", report.closed_form),
            ("oracle", report.oracle),
            ("error_estimate", report.error_estimate),
            ("abs_err", report.abs_err),
            ("rel_err", report.rel_err),
        ]
    )
