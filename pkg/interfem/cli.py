"""
Command Line Interface for interfem
"""

import argparse
import sys
from typing import Optional, Sequence

from .src.campaigns import CAMPAIGN_KINDS, load_config, run_campaign
from .src.config import get_config
from .src.exceptions import error_category, exit_code_for
from .src.utils.logging import setup_logging


def print_error(error: BaseException):
    """Print the single machine-parsable error line."""
    code = getattr(error, "error_code", None) or type(error).__name__
    message = str(getattr(error, "message", error)).replace("\n", " ")
    print(f"error category={error_category(error)} code={code} message={message}", file=sys.stderr)


def print_success(message: str):
    """Print a success message."""
    print(message)


def _point(text: str):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}")
    return (x, y)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interfem", description="Finite element solver for transmission problems")
    parser.add_argument("--log-level", default=None, help="Logging level (DEBUG, INFO, WARNING, ERROR)")
    subparsers = parser.add_subparsers(dest="command", help="Available campaigns")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="Run configuration file")
    common.add_argument("--out", default=None, help="Artifact directory")
    common.add_argument("--order", type=int, choices=(1, 2), default=None, help="Basis order")
    common.add_argument("--h", type=float, default=None, help="Target mesh size")
    common.add_argument("--seed", type=int, default=None, help="Sampling and meshing seed")

    for kind in CAMPAIGN_KINDS:
        sub = subparsers.add_parser(kind, parents=[common], help=f"Run a {kind} campaign")
        if kind in ("convergence", "compare", "probe"):
            sub.add_argument("--levels", type=int, default=None,
                             help="Probe ladder length" if kind == "probe" else "Number of refinement levels")
        if kind == "probe":
            sub.add_argument("--center", type=_point, default=None, help="Probe center x,y")
            sub.add_argument("--mu", type=float, default=None, help="Radius ratio of the ladder")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return 0

    settings = get_config()
    setup_logging(level=args.log_level or settings.log_level, format_string=settings.log_format)
    try:
        config = load_config(args.config)
        config = config.with_overrides(
            kind=args.command,
            out=args.out,
            order=args.order,
            h=args.h,
            seed=args.seed,
            levels=getattr(args, "levels", None),
            center=getattr(args, "center", None),
            mu=getattr(args, "mu", None),
        )
        result = run_campaign(config)
    except KeyboardInterrupt:
        print("Operation cancelled by user", file=sys.stderr)
        return 130
    except Exception as e:
        print_error(e)
        return exit_code_for(e)

    for name, path in sorted(result.artifacts.items()):
        print_success(f"{name}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
