"""
KID Verifier - Main Entry Point
Batch verification of Killing Initial Data, warp factors and Killing developments.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

import config
from commands import suite_names
from errors import ConfigError
from run_config import load_run_config
from toolkit import KidToolkit

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    """Command-line surface: one subcommand per verb, shared run options on each."""
    parser = argparse.ArgumentParser(prog=config.TOOL_NAME, description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {config.TOOL_VERSION}")
    verbs = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run file")
    common.add_argument("--model", help="model descriptor, e.g. sphere:n=3,r=1")
    common.add_argument("--kid", help="KID descriptor, e.g. obata:i=4,c=1")
    common.add_argument("--samples", type=int, help="sample count")
    common.add_argument("--seed", type=int, help="sampling seed")
    common.add_argument("--tol", type=float, help="KID system tolerance")
    common.add_argument("--output", help="report file (.json) or directory")
    common.add_argument("--jet-order", dest="jet_order", type=int, help="jet order")
    common.add_argument("--log-level", dest="log_level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    verify = verbs.add_parser("verify", parents=[common], help="evaluate KID systems and identities")
    verify.add_argument("--system", dest="systems", action="append",
                        help="KID system (repeatable): sigma, sigma1..sigma4, sigma4p")
    verify.add_argument("--identity", dest="identities", action="append",
                        help=f"identity suite (repeatable): {', '.join(suite_names())}")

    warp = verbs.add_parser("warp", parents=[common], help="solve for a periodic warp factor")
    warp.add_argument("--no-csv", dest="csv", action="store_false", default=None)
    warp.add_argument("--no-kernel", dest="kernel", action="store_false", default=None)

    verbs.add_parser("develop", parents=[common], help="check the Killing development")

    refine = verbs.add_parser("refine", parents=[common], help="residual trend under refinement")
    refine.add_argument("--suite", help="suite to rerun at every level")
    return parser


def overrides_from(args: argparse.Namespace) -> dict[str, Any]:
    """Flag values as RunConfig overrides (unset flags are None and ignored)."""
    return {
        "command": args.command,
        "model": args.model,
        "kid": args.kid,
        "samples": args.samples,
        "seed": args.seed,
        "output": args.output,
        "jet_order": args.jet_order,
        "systems": getattr(args, "systems", None),
        "identities": getattr(args, "identities", None),
        "tolerances": {"sigma": args.tol},
        "warp": {"csv": getattr(args, "csv", None), "kernel": getattr(args, "kernel", None)},
        "refine": {"suite": getattr(args, "suite", None)},
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        0 if every report passes, 1 on a verification failure, 2 on a
        configuration or internal error
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=config.LOG_FORMAT)
    try:
        run_config = load_run_config(args.config, overrides_from(args))
        toolkit = KidToolkit(run_config)
        report = toolkit.run()
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return config.EXIT_ERROR
    except Exception:
        logger.exception("Internal error")
        return config.EXIT_ERROR
    print(report.summary().splitlines()[0])
    return toolkit.exit_status(report)


if __name__ == "__main__":
    sys.exit(main())
