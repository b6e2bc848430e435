"""``berezin``: integrate an element against d e^nu."""

import argparse

from src.commands.context import CommandContext
from src.lib.berezin import adjoint_full, berezin_integral
from src.lib.element_io import evaluate, format_element
from src.lib.multi_index import MultiIndex
from src.utils.error_handlers import EXIT_OK, ExpressionParseError, InvalidIndex


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("berezin", help="Berezin integral of an element")
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--index", help="Monomial such as 'e[1]*e[3]^2', or dense exponents '1,0,2'")
    target.add_argument("--by", help="Element f; applies the adjoint M*_f instead of a single monomial")
    parser.add_argument("--input", required=True, help="Integrand: expression, record JSON, or @path")
    parser.set_defaults(handler=run)
    return parser


def parse_index(text: str) -> MultiIndex:
    """
    Read a multi-index from a unit monomial or a dense exponent list.

    Raises:
        ExpressionParseError: If the text is neither form
    """
    stripped = text.strip()
    if stripped and all(part.strip().isdigit() for part in stripped.split(",")):
        try:
            return MultiIndex.from_exponents(tuple(int(part) for part in stripped.split(",")))
        except InvalidIndex as e:
            raise ExpressionParseError(str(e), 0) from e
    element = evaluate(stripped)
    if len(element) != 1 or next(iter(element.terms.values())) != 1:
        raise ExpressionParseError(f"Index must be a single monomial with coefficient 1, got '{element}'", 0)
    return next(iter(element.terms))


def run(args: argparse.Namespace, context: CommandContext) -> int:
    integrand = context.load_element(args.input)
    if args.index is not None:
        result = berezin_integral(parse_index(args.index), integrand)
    else:
        result = adjoint_full(context.load_element(args.by), integrand)
    context.emit(format_element(result))
    return EXIT_OK
