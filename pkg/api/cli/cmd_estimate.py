"""estimate: sample statistics, sigma2_hat and a confidence interval for m."""
import argparse
import math
import sys
from typing import Iterable, Optional

from api.cli.arguments import add_format_argument
from api.cli.output import write_fields, write_json
from api.schemas.commands import EstimateResult, KurtosisSummary
from core.exceptions import DomainError
from services.estimators import confidence_interval, sample_kurtosis, summarize
from services.moments import KURTOSIS_WINDOW_TOP, kurtosis_closed, kurtosis_excess, kurtosis_shape


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "estimate", help="Estimate from newline-separated reals (stdin or --file)"
    )
    parser.add_argument("--q", type=float, required=True, help="Deformation parameter, q < 5/3")
    parser.add_argument("--file", type=argparse.FileType("r"), default=None)
    parser.add_argument(
        "--sigma2-known", type=float, default=None, help="Known sigma2; enables the interval"
    )
    parser.add_argument("--level", type=float, default=0.95, help="Confidence level")
    parser.add_argument(
        "--method",
        choices=("clt", "q-quantile"),
        default="clt",
        help="Quantile of the interval: N_1(0, 1) (clt) or N_q(0, 1)",
    )
    add_format_argument(parser)
    parser.set_defaults(handler=run)


def parse_values(lines: Iterable[str]) -> list[float]:
    """Reals from text lines; blank lines are skipped."""
    values = []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            value = float(text)
        except ValueError:
            raise DomainError(f"line {number}: '{text}' is not a real number") from None
        if not math.isfinite(value):
            raise DomainError(f"line {number}: '{text}' is not finite")
        values.append(value)
    return values


def run(args: argparse.Namespace) -> None:
    source = args.file or sys.stdin
    try:
        values = parse_values(source)
    finally:
        if args.file is not None:
            args.file.close()
    stats = summarize(values, args.q)
    interval = None
    if args.sigma2_known is not None:
        interval = confidence_interval(stats, args.sigma2_known, args.level, args.method)
    kurtosis: Optional[KurtosisSummary] = None
    if args.q < KURTOSIS_WINDOW_TOP and stats.s2 > 0:
        observed = sample_kurtosis(values)
        excess = kurtosis_excess(args.q, observed)
        kurtosis = KurtosisSummary(
            sample_kurtosis=observed,
            reference=kurtosis_closed(args.q),
            excess=excess,
            shape=kurtosis_shape(excess),
        )
    result = EstimateResult(stats=stats, interval=interval, kurtosis=kurtosis)
    if args.format == "json":
        write_json(result)
        return
    fields: list[tuple[str, object]] = [
        ("n", stats.n),
        ("mean", stats.mean),
        ("s2", stats.s2),
        ("sigma2_hat", stats.sigma2_hat),
    ]
    if interval is not None:
        fields += [
            ("ci_lo", interval.lo),
            ("ci_hi", interval.hi),
            ("ci_level", interval.level),
            ("ci_method", interval.method),
        ]
    if kurtosis is not None:
        fields += [
            ("kurtosis", kurtosis.sample_kurtosis),
            ("kurtosis_excess", kurtosis.excess),
            ("shape", kurtosis.shape),
        ]
    write_fields(fields)
