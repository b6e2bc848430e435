"""Formatting utilities for coefficients, CSV floats and error messages."""

from fractions import Fraction
from typing import Any, Union

from src.lib.scalars import Cyclotomic, ExactScalar

RationalLike = Union[int, Fraction]


def format_error_message(error: Exception, context: str = "") -> str:
    """
    Format exception into user-friendly error message.

    Args:
        error: Exception object
        context: Additional context about where the error occurred

    Returns:
        User-friendly error message string
    """
    error_type = type(error).__name__
    error_message = str(error)

    # Map common exceptions to user-friendly messages
    user_friendly_messages = {
        'FileNotFoundError': 'File not found',
        'PermissionError': 'Permission denied',
        'ZeroDivisionError': 'Division by zero',
        'OverflowError': 'Numeric overflow',
    }

    base_message = user_friendly_messages.get(error_type, f'{error_type}: {error_message}')
    if error_type in user_friendly_messages and error_message:
        base_message = f'{base_message} ({error_message})'

    if context:
        return f'{context}: {base_message}'

    return base_message


def format_float17(value: float) -> str:
    """
    Format a float with 17 significant digits (round-trip safe, locale free).

    Args:
        value: Float to format

    Returns:
        Decimal string such as '0.29999999999999999'
    """
    return f"{float(value):.17g}"


def format_rational(value: RationalLike) -> str:
    """Render an int or Fraction as '3', '-1/2'."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return str(value.numerator)
    return str(value)


def _times(coefficient: RationalLike, token: str) -> str:
    if coefficient == 1:
        return token
    if coefficient == -1:
        return f"-{token}"
    return f"{format_rational(coefficient)}*{token}"


def format_cyclotomic(value: Cyclotomic) -> str:
    """
    Render a + b*w using the smallest of the forms r, r*w, r*w^2 or 'a + b*w'.

    Args:
        value: Element of Q(w)

    Returns:
        Text accepted by the expression parser
    """
    a, b = value.a, value.b
    if b == 0:
        return format_rational(a)
    if a == 0:
        return _times(b, "w")
    if a == b:
        # a + a*w = -a*w^2
        return _times(-a, "w^2")
    if b < 0:
        return f"{format_rational(a)} - {_times(-b, 'w')}"
    return f"{format_rational(a)} + {_times(b, 'w')}"


def format_exact_scalar(value: ExactScalar) -> str:
    """
    Render p + i*q from Q(i, w) exactly, with w = exp(2*pi*i/3).

    Args:
        value: Exact coefficient

    Returns:
        Text such as '1/2', 'w^2', '2 + 3*i' or '(1 + 2*w)*i'
    """
    p, q = value.p, value.q
    if q.is_zero:
        return format_cyclotomic(p)
    if q.b == 0:
        imaginary = _times(q.a, "i")
    else:
        imaginary = f"({format_cyclotomic(q)})*i"
    if p.is_zero:
        return imaginary
    real = format_cyclotomic(p)
    if " " in real:
        real = f"({real})"
    if imaginary.startswith("-"):
        return f"{real} - {imaginary[1:]}"
    return f"{real} + {imaginary}"


def format_complex(value: complex) -> str:
    """Render a float coefficient with shortest round-trip digits."""
    value = complex(value)
    real, imag = value.real, value.imag
    if imag == 0:
        return repr(real)
    if real == 0:
        return f"{imag!r}*i"
    if imag < 0:
        return f"{real!r} - {-imag!r}*i"
    return f"{real!r} + {imag!r}*i"


def format_coefficient(value: Any) -> str:
    """Render an exact or float coefficient."""
    if isinstance(value, ExactScalar):
        return format_exact_scalar(value)
    return format_complex(value)
