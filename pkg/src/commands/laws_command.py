"""``laws``: run the seeded property suite."""

import argparse
import time

from src.commands.context import CommandContext
from src.lib.law_suite import run_law_suite
from src.utils.error_handlers import EXIT_DOMAIN_ERROR, EXIT_OK
from src.utils.logging_config import log_law_suite


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("laws", help="Run the algebra law suite")
    parser.add_argument("--seed", type=int, default=1, help="Generator seed (default: 1)")
    parser.add_argument("--trials", type=int, default=100, help="Random instances per law (default: 100)")
    parser.add_argument("--out", help="Write the per-law table here instead of stdout")
    parser.add_argument(
        "--inject-sigma-bug",
        action="store_true",
        help="Use a deliberately wrong structure phase inside the suite (mutation check)",
    )
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace, context: CommandContext) -> int:
    if args.trials < 0:
        raise ValueError(f"--trials must be non-negative, got {args.trials}")
    started = time.time()
    report = run_law_suite(args.seed, args.trials, args.inject_sigma_bug)
    log_law_suite(context.logger, args.seed, args.trials, report.failures, time.time() - started)

    context.write_frame(report.frame(), args.out)
    if report.passed:
        context.emit("all laws hold")
        return EXIT_OK
    context.emit(f"counterexample: {report.first_counterexample}")
    return EXIT_DOMAIN_ERROR
