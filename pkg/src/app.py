"""Command-line entry point for the ternary Grassmann engine."""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, TextIO

# Add parent directory to path for imports when running as script
# This allows both direct execution (python src/app.py) and module execution (python -m src.app)
_script_dir = Path(__file__).parent
_project_root = _script_dir.parent
if str(_project_root) not in sys.path:
    sys.path.insert(0, str(_project_root))

from src import __version__
from src.commands import berezin_command, eval_command, kernel_commands, laws_command, norm_commands
from src.commands.context import CommandContext, select_field
from src.utils.config import load_config
from src.utils.error_handlers import (
    EXIT_DOMAIN_ERROR,
    EXIT_OK,
    ExpressionParseError,
    GrassmannError,
    exit_code_for,
    handle_domain_error,
    handle_parse_error,
)
from src.utils.logging_config import log_command, setup_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ternary-grassmann",
        description="Exact and numerical computations in the ternary Grassmann algebra.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="key=value configuration file")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level to stderr")
    parser.add_argument("--log-file", help="Also write the log to this file")
    parser.add_argument("--float", action="store_true", help="Use float coefficients instead of exact ones")

    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")
    eval_command.add_parser(subparsers)
    laws_command.add_parser(subparsers)
    norm_commands.add_parsers(subparsers)
    berezin_command.add_parser(subparsers)
    kernel_commands.add_parsers(subparsers)
    return parser


def _source_text(args: argparse.Namespace) -> str:
    """The expression a parse error most likely points into."""
    for name in ("expression", "element", "input", "index"):
        value = getattr(args, name, None)
        if isinstance(value, str) and not value.startswith("@"):
            return value
    return ""


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """
    Parse arguments, run one subcommand and map its outcome to an exit code.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
        stdout: Result stream (default: sys.stdout)
        stderr: Diagnostic stream (default: sys.stderr)

    Returns:
        0 on success, 1 on a domain error or failed check, 2 on a parse error
    """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_DOMAIN_ERROR

    logger = setup_logging(logging.DEBUG if args.verbose else logging.WARNING, args.log_file, stream=stderr)
    _t0 = time.time()
    error: Optional[BaseException] = None
    code = EXIT_OK
    try:
        config = load_config(args.config)
        context = CommandContext(config, select_field(args.float, config), stdout, stderr, logger)
        code = args.handler(args, context)
    except ExpressionParseError as e:
        error = e
        print(handle_parse_error(e, _source_text(args)), file=stderr)
    except (GrassmannError, ValueError, ZeroDivisionError, FileNotFoundError) as e:
        error = e
        logger.debug("%s failed", args.command, exc_info=True)
        print(handle_domain_error(e, args.command), file=stderr)

    if error is not None:
        code = exit_code_for(error)
    log_command(logger, args.command, "success" if code == EXIT_OK else "error", time.time() - _t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
