"""Error handling utilities for user-friendly error messages and exit codes."""

from typing import Optional
from .formatters import format_error_message


class GrassmannError(Exception):
    """Base exception for ternary Grassmann engine errors."""
    pass


class AlgebraError(GrassmannError):
    """Error raised by exact or floating algebra operations."""
    pass


class NotInvertible(AlgebraError):
    """Element has zero (or numerically negligible) scalar part."""
    pass


class InvalidIndex(AlgebraError, ValueError):
    """Malformed multi-index: position below 1 or exponent outside {0, 1, 2}."""
    pass


class ScaleError(GrassmannError):
    """Error in the weighted Hilbert scale."""
    pass


class Overflow(ScaleError):
    """A norm exceeds the floating range even in log-domain accumulation."""
    pass


class DivergenceGuard(ScaleError):
    """Neither convergence criterion of a power series holds."""
    pass


class KernelError(GrassmannError):
    """Error in spectral kernel numerics."""
    pass


class DomainViolation(KernelError):
    """Input lies outside the domain of the spectral multiplier."""
    pass


class TailDivergence(KernelError):
    """Spectral density tail is not integrable against 4/u^2."""
    pass


class EnvelopeViolation(KernelError, ValueError):
    """Declared growth envelope is inadmissible (b >= 2, K <= 0 or N < 0)."""
    pass


class NoConvergence(KernelError):
    """Refinement cap reached without meeting the tolerance."""
    pass


class ExpressionParseError(GrassmannError):
    """Syntax error in an element expression or serialized element."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class ConfigError(GrassmannError):
    """Invalid configuration file or value."""
    pass


EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_PARSE_ERROR = 2


def exit_code_for(error: Optional[BaseException]) -> int:
    """
    Map an exception (or None for success) to a CLI exit code.

    Args:
        error: Exception raised by a command, or None

    Returns:
        0 on success, 2 for parse errors, 1 for any other engine or value error
    """
    if error is None:
        return EXIT_OK
    if isinstance(error, ExpressionParseError):
        return EXIT_PARSE_ERROR
    return EXIT_DOMAIN_ERROR


def handle_domain_error(error: Exception, context: str = "") -> str:
    """
    Handle algebra, scale and kernel errors and return a user-friendly message.

    Engine errors carry their own precise text (NotInvertible is surfaced
    verbatim), so only foreign exceptions are mapped through the generic
    formatter.

    Args:
        error: Exception that occurred during evaluation
        context: Short description of what was being computed

    Returns:
        User-friendly error message
    """
    prefix = f"{context}: " if context else ""

    if isinstance(error, NotInvertible):
        return f"{prefix}NotInvertible: {error}"
    elif isinstance(error, (TailDivergence, DomainViolation, EnvelopeViolation)):
        return f"{prefix}{type(error).__name__}: {error}"
    elif isinstance(error, GrassmannError):
        return f"{prefix}{type(error).__name__}: {error}"
    elif isinstance(error, ValueError):
        return f"{prefix}Invalid argument: {error}"
    else:
        return format_error_message(error, context)


def handle_parse_error(error: Exception, text: str = "") -> str:
    """
    Handle expression parsing errors and point at the offending character.

    Args:
        error: Exception raised by the parser
        text: Source text being parsed

    Returns:
        Message followed, when a position is known, by the text and a caret line
    """
    message = f"Parse error: {error}"
    position = getattr(error, "position", None)
    if text and position is not None and 0 <= position <= len(text):
        message += f"\n  {text}\n  {' ' * position}^"
    return message
