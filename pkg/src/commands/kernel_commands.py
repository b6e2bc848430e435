"""``covariance`` and ``diff-check``: spectral kernels of the Grassmann processes."""

import argparse
import time

from src.commands.context import CommandContext, float_list, weight_profile
from src.lib.hilbert_scale import IDENTITY_WEIGHTS
from src.lib.kernels import DIFFERENCE_STEPS, covariance_grid, differentiability_check
from src.lib.spectral import parse_density_spec
from src.utils.config import merge_overrides
from src.utils.error_handlers import EXIT_OK
from src.utils.logging_config import log_kernel_evaluation


def add_parsers(subparsers: argparse._SubParsersAction) -> None:
    covariance = subparsers.add_parser("covariance", help="Tabulate the covariance kernel K(t, s)")
    covariance.add_argument("--density", required=True, help="bm, fbm:H=<v> or table:<path>")
    covariance.add_argument("--t", type=float_list, required=True, help="Comma separated t grid")
    covariance.add_argument("--s", type=float_list, help="Comma separated s grid (default: the t grid)")
    covariance.add_argument("--mode", choices=("quadrature", "series"), default="quadrature")
    covariance.add_argument("--N", type=int, help="Series length (default: hermite_order from the config)")
    covariance.add_argument("--workers", type=int, help="Thread pool size for quadrature cells")
    covariance.add_argument("--out", help="Write the CSV here instead of stdout")
    covariance.set_defaults(handler=run_covariance)

    diff = subparsers.add_parser("diff-check", help="Finite-difference report of the Fock-truncated process")
    diff.add_argument("--density", required=True, help="bm, fbm:H=<v> or table:<path>")
    diff.add_argument("--t", type=float, default=0.5, help="Time (default: 0.5)")
    diff.add_argument("--p", type=int, default=1, help="Scale level of the error norm (default: 1)")
    diff.add_argument("--N", type=int, default=200, help="Series length (default: 200)")
    diff.add_argument("--steps", type=float_list, default=list(DIFFERENCE_STEPS), help="Comma separated h values")
    diff.add_argument("--weights", type=weight_profile, default=IDENTITY_WEIGHTS, help="identity or linear:<rate>")
    diff.add_argument("--out", help="Write the CSV here instead of stdout")
    diff.set_defaults(handler=run_diff_check)


def run_covariance(args: argparse.Namespace, context: CommandContext) -> int:
    density = parse_density_spec(args.density)
    config = merge_overrides(context.config, workers=args.workers)
    started = time.time()
    grid = covariance_grid(density, args.t, args.s or args.t, mode=args.mode, N=args.N, config=config)
    log_kernel_evaluation(context.logger, density.label, args.mode, grid.values.size, time.time() - started)
    if grid.is_square and not grid.is_psd():
        context.logger.warning("Covariance grid has eigenvalue %.3e below the PSD floor", grid.min_eigenvalue())

    if args.out:
        grid.to_csv(args.out)
    else:
        grid.to_csv(context.stdout)
    return EXIT_OK


def run_diff_check(args: argparse.Namespace, context: CommandContext) -> int:
    density = parse_density_spec(args.density)
    report = differentiability_check(
        density, args.t, args.p, args.weights, N=args.N, steps=args.steps, config=context.config
    )
    context.write_frame(report, args.out)
    return EXIT_OK
