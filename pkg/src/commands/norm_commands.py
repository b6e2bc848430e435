"""``norm`` and ``vage-check``: Hilbert-scale reports."""

import argparse

import numpy as np

from src.commands.context import CommandContext, weight_profile
from src.lib.algebra import TernaryElement
from src.lib.hilbert_scale import IDENTITY_WEIGHTS, check_vage, h_norm, p_norm, vage_report_frame
from src.lib.multi_index import MultiIndex
from src.lib.scalars import FLOAT
from src.utils.error_handlers import EXIT_DOMAIN_ERROR, EXIT_OK
from src.utils.formatters import format_float17
from src.utils.validators import validate_scale_pair


def add_parsers(subparsers: argparse._SubParsersAction) -> None:
    norm = subparsers.add_parser("norm", help="p-norms and H_-p norms of an element")
    norm.add_argument("element", help="Expression, record JSON, or @path")
    norm.add_argument("--p", type=float, action="append", default=[], help="p-norm exponent (repeatable)")
    norm.add_argument(
        "--scale", type=int, action="append", default=[],
        help="Hilbert-scale level q; prints ||z||_-q (repeatable, negative q gives H_|q|)",
    )
    norm.add_argument("--weights", type=weight_profile, default=IDENTITY_WEIGHTS, help="identity or linear:<rate>")
    norm.set_defaults(handler=run_norm)

    vage = subparsers.add_parser("vage-check", help="Check the Våge inequality on random pairs")
    vage.add_argument("--p", type=int, required=True, help="Level of the product")
    vage.add_argument("--q", type=int, required=True, help="Level of the first factor")
    vage.add_argument("--seed", type=int, default=1)
    vage.add_argument("--trials", type=int, default=100)
    vage.add_argument("--max-position", type=int, default=4, help="Largest generator position used")
    vage.add_argument("--closed-form", action="store_true", help="Use the closed-form constant")
    vage.add_argument("--weights", type=weight_profile, default=IDENTITY_WEIGHTS, help="identity or linear:<rate>")
    vage.add_argument("--out", help="Write the report CSV here instead of stdout")
    vage.set_defaults(handler=run_vage_check)


def run_norm(args: argparse.Namespace, context: CommandContext) -> int:
    element = context.load_element(args.element)
    levels = args.scale if args.p or args.scale else [1]
    for p in args.p:
        context.emit(f"p-norm({p:g})\t{format_float17(p_norm(element, p))}")
    for q in levels:
        context.emit(f"H_{-q}\t{format_float17(h_norm(element, -q, args.weights))}")
    return EXIT_OK


def _random_pair(rng: np.random.Generator, max_position: int) -> TernaryElement:
    count = int(rng.integers(1, 5))
    terms = []
    for _ in range(count):
        index = MultiIndex.from_exponents(tuple(int(k) for k in rng.integers(0, 3, size=max_position)))
        real, imag = rng.normal(size=2)
        terms.append((index, complex(real, imag)))
    return TernaryElement(terms, FLOAT)


def run_vage_check(args: argparse.Namespace, context: CommandContext) -> int:
    is_valid, message = validate_scale_pair(args.p, args.q)
    if not is_valid:
        raise ValueError(message)
    if args.max_position < 1:
        raise ValueError(f"--max-position must be at least 1, got {args.max_position}")
    rng = np.random.default_rng(args.seed)
    reports = []
    for _ in range(args.trials):
        f = _random_pair(rng, args.max_position)
        g = _random_pair(rng, args.max_position)
        reports.append(check_vage(f, g, args.p, args.q, args.weights, closed_form=args.closed_form))
    frame = vage_report_frame(reports)
    context.write_frame(frame, args.out)
    failures = int((~frame["holds"]).sum() + (~frame["mirrored_holds"]).sum()) if len(frame) else 0
    context.logger.info("vage-check: %d pairs, %d failures", len(reports), failures)
    return EXIT_OK if failures == 0 else EXIT_DOMAIN_ERROR
