"""``eval``: evaluate an element expression and print its canonical form."""

import argparse

from src.commands.context import CommandContext
from src.lib.element_io import element_to_json, format_element
from src.utils.error_handlers import EXIT_OK


def add_parser(subparsers: argparse._SubParsersAction) -> argparse.ArgumentParser:
    parser = subparsers.add_parser(
        "eval",
        help="Evaluate an element expression",
        description="Evaluate e.g. 'inv(1 + e[1])' or 'grade(0, conj(e[1])*e[1])'; '@path' reads a file.",
    )
    parser.add_argument("expression", help="Expression, record JSON, or @path")
    parser.add_argument("--json", action="store_true", help="Print the record form instead of text")
    parser.set_defaults(handler=run)
    return parser


def run(args: argparse.Namespace, context: CommandContext) -> int:
    element = context.load_element(args.expression)
    context.emit(element_to_json(element) if args.json else format_element(element))
    return EXIT_OK
