"""verify: run every closed-form-versus-oracle check and the printed-formula adjudications."""
import argparse
import logging

from api.cli.arguments import add_format_argument
from api.cli.output import write_json, write_verify_csv, write_verify_text
from core.exceptions import DomainError, VerificationFailed
from services.verification_service import VerificationService

logger = logging.getLogger(__name__)


def q_grid(text: str) -> list[float]:
    """Comma-separated q values."""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid q grid '{text}'") from None


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="Run the verification suite")
    parser.add_argument(
        "--q-grid", type=q_grid, default=None, help="Comma-separated q values for the moment checks"
    )
    parser.add_argument(
        "--tol-scale",
        type=float,
        default=1.0,
        help="Divide every tolerance by this factor (below 1 relaxes the suite)",
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed (default: QSTAT_SEED)")
    parser.add_argument("--workers", type=int, default=None, help="Suites run in parallel")
    parser.add_argument(
        "--no-monte-carlo",
        dest="monte_carlo",
        action="store_false",
        help="Skip the sampler and Monte Carlo experiment suites",
    )
    add_format_argument(parser, ("text", "json", "csv"))
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> None:
    """Print the report; raise VerificationFailed when any entry FAILs."""
    if args.workers is not None and args.workers < 1:
        raise DomainError(f"workers must be >= 1 (got {args.workers})")
    service = VerificationService(
        tol_scale=args.tol_scale,
        q_grid=args.q_grid,
        seed=args.seed,
        workers=args.workers,
        monte_carlo=args.monte_carlo,
    )
    report = service.run()
    if args.format == "json":
        write_json(report)
    elif args.format == "csv":
        write_verify_csv(report)
    else:
        write_verify_text(report)
    if report.failures:
        logger.warning(f"verify finished with {report.failures} failure(s)")
        raise VerificationFailed(report.failures)
