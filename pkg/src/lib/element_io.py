"""Text and record forms of TernaryElement, and the expression evaluator behind ``eval``."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Union

from src.lib import algebra
from src.lib.algebra import INVERSE_FLOOR, TernaryElement
from src.lib.multi_index import MultiIndex
from src.lib.scalars import EXACT, CoefficientField, Cyclotomic, ExactScalar, FloatField
from src.utils.error_handlers import ExpressionParseError, InvalidIndex
from src.utils.formatters import format_coefficient

TERM_SEPARATOR = " + "


def format_element(z: TernaryElement) -> str:
    """
    Canonical text form: terms in canonical order joined by ' + '.

    A unit coefficient is omitted, any other coefficient is parenthesised,
    e.g. ``1 + (-1)*e[1] + e[1]^2`` or ``(w^2)*e[1]*e[2]``.

    Args:
        z: Element to render

    Returns:
        Text that parses back to an equal element; '0' for the zero element
    """
    if z.is_zero:
        return "0"
    field = z.field
    parts: List[str] = []
    for index, value in z.items():
        text = format_coefficient(value)
        if index.is_empty:
            simple = " " not in text and not text.startswith("-")
            parts.append(text if simple or len(z) == 1 else f"({text})")
        elif _is_one(value, field):
            parts.append(str(index))
        else:
            parts.append(f"({text})*{index}")
    return TERM_SEPARATOR.join(parts)


def _is_one(value: Any, field: CoefficientField) -> bool:
    if isinstance(field, FloatField):
        return complex(value) == 1
    return value == field.one


def element_to_record(z: TernaryElement) -> Dict[str, Any]:
    """
    Structured record ``{"terms": [{"coeff": [re, im], "index": [[pos, exp], ...]}]}``.

    Exact elements also carry the exact coefficient text under ``"exact"`` so
    the record reloads without rounding.
    """
    exact = not isinstance(z.field, FloatField)
    terms = []
    for index, value in z.items():
        c = complex(value)
        term: Dict[str, Any] = {
            "coeff": [c.real, c.imag],
            "index": [[position, exponent] for position, exponent in index],
        }
        if exact:
            term["exact"] = format_coefficient(value)
        terms.append(term)
    return {"terms": terms}


def record_to_element(record: Dict[str, Any], field: CoefficientField = EXACT) -> TernaryElement:
    """
    Rebuild an element from its record form.

    Raises:
        ExpressionParseError: If the record structure is malformed
    """
    if not isinstance(record, dict) or not isinstance(record.get("terms"), list):
        raise ExpressionParseError("Record must be an object with a 'terms' list", 0)
    pairs = []
    for number, term in enumerate(record["terms"]):
        try:
            entries = [(int(position), int(exponent)) for position, exponent in term["index"]]
            index = MultiIndex(entries)
            if "exact" in term and not isinstance(field, FloatField):
                value: Any = _scalar_value(evaluate(term["exact"], field))
            else:
                real, imag = term["coeff"]
                value = complex(float(real), float(imag))
        except InvalidIndex as e:
            raise ExpressionParseError(f"Term {number}: {e}", 0) from e
        except (KeyError, TypeError, ValueError) as e:
            raise ExpressionParseError(f"Term {number} is malformed: {e}", 0) from e
        pairs.append((index, value))
    return TernaryElement(pairs, field)


def _scalar_value(z: TernaryElement) -> Any:
    if not z.is_scalar:
        raise ValueError(f"Coefficient '{z}' is not a scalar")
    return algebra.body(z)


def element_to_json(z: TernaryElement) -> str:
    return json.dumps(element_to_record(z), sort_keys=True)


def parse_element(text: str, field: CoefficientField = EXACT, floor: float = INVERSE_FLOOR) -> TernaryElement:
    """
    Parse either serialized form (record JSON or canonical text).

    Args:
        text: Record JSON (starting with '{') or an element expression
        field: Coefficient field of the result
        floor: Smallest body modulus inv() accepts in float mode

    Returns:
        Parsed element

    Raises:
        ExpressionParseError: With the offending position on syntax errors
    """
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            record = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise ExpressionParseError(f"Invalid record JSON: {e.msg}", e.pos) from e
        return record_to_element(record, field)
    return evaluate(text, field, floor)


def load_element(
    source: Union[str, Path], field: CoefficientField = EXACT, floor: float = INVERSE_FLOOR
) -> TernaryElement:
    """Parse an element from a file path prefixed with '@', or from literal text."""
    source = str(source)
    if source.startswith("@"):
        path = Path(source[1:])
        if not path.exists():
            raise FileNotFoundError(f"Element file not found: {path}")
        return parse_element(path.read_text(encoding="utf-8"), field, floor)
    return parse_element(source, field, floor)


# Expression grammar (precedence low to high):
#   expr    := term (('+' | '-') term)*
#   term    := unary (('*' | '/') unary)*
#   unary   := ('-' | '+') unary | power
#   power   := atom ('^' '-'? INT)?
#   atom    := NUMBER | 'i' | 'w' | 'e' '[' INT ']' | FUNC '(' args ')' | '(' expr ')'
# Products evaluate left to right with algebra semantics; '/' divides by an inverse.

_TOKEN_PATTERN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()\[\],]))"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """
    Split an expression into tokens with 0-based positions.

    Raises:
        ExpressionParseError: On a character outside the grammar
    """
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        if text[position].isspace():
            position += 1
            continue
        match = _TOKEN_PATTERN.match(text, position)
        if match is None or match.lastgroup is None:
            raise ExpressionParseError(f"Unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(Token(kind, match.group(kind), start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionEvaluator:
    """Recursive-descent evaluator producing TernaryElement values."""

    def __init__(self, text: str, field: CoefficientField = EXACT, floor: float = INVERSE_FLOOR) -> None:
        self.text = text
        self.field = field
        self.floor = floor
        self.tokens = tokenize(text)
        self.cursor = 0
        self.functions: Dict[str, Callable[[List[TernaryElement], Token], TernaryElement]] = {
            "inv": self._call_inverse,
            "conj": self._call_conj,
            "grade": self._call_grade,
            "z3": self._call_z3,
        }

    @property
    def current(self) -> Token:
        return self.tokens[self.cursor]

    def _advance(self) -> Token:
        token = self.tokens[self.cursor]
        self.cursor += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self.current
        if token.text != text:
            found = repr(token.text) if token.kind != "end" else "end of input"
            raise ExpressionParseError(f"Expected {text!r}, found {found}", token.position)
        return self._advance()

    def parse(self) -> TernaryElement:
        if self.current.kind == "end":
            raise ExpressionParseError("Empty expression", 0)
        value = self._expression()
        if self.current.kind != "end":
            raise ExpressionParseError(f"Unexpected token {self.current.text!r}", self.current.position)
        return value

    def _expression(self) -> TernaryElement:
        value = self._term()
        while self.current.text in ("+", "-"):
            operator = self._advance().text
            right = self._term()
            value = algebra.add(value, right if operator == "+" else algebra.scale(-1, right))
        return value

    def _term(self) -> TernaryElement:
        value = self._unary()
        while self.current.text in ("*", "/"):
            operator = self._advance()
            right = self._unary()
            if operator.text == "*":
                value = algebra.mul(value, right)
            else:
                value = algebra.mul(value, algebra.inverse(right, self.floor))
        return value

    def _unary(self) -> TernaryElement:
        if self.current.text == "-":
            self._advance()
            return algebra.scale(-1, self._unary())
        if self.current.text == "+":
            self._advance()
            return self._unary()
        return self._power()

    def _power(self) -> TernaryElement:
        base = self._atom()
        if self.current.text != "^":
            return base
        self._advance()
        negative = False
        if self.current.text == "-":
            self._advance()
            negative = True
        exponent = self._integer("exponent")
        if negative:
            base = algebra.inverse(base, self.floor)
        return algebra.power(base, exponent)

    def _integer(self, what: str) -> int:
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise ExpressionParseError(f"Expected an integer {what}", token.position)
        self._advance()
        return int(token.text)

    def _atom(self) -> TernaryElement:
        token = self.current
        if token.kind == "number":
            self._advance()
            return algebra.scalar(Fraction(token.text), self.field)
        if token.text == "(":
            self._advance()
            value = self._expression()
            self._expect(")")
            return value
        if token.kind == "name":
            return self._name(token)
        found = repr(token.text) if token.kind != "end" else "end of input"
        raise ExpressionParseError(f"Unexpected {found}", token.position)

    def _name(self, token: Token) -> TernaryElement:
        self._advance()
        if token.text == "i":
            return algebra.scalar(ExactScalar(0, 1), self.field)
        if token.text == "w":
            return algebra.scalar(ExactScalar(Cyclotomic(0, 1)), self.field)
        if token.text == "e":
            self._expect("[")
            position_token = self.current
            position = self._integer("generator position")
            if position < 1:
                raise ExpressionParseError("Generator positions start at 1", position_token.position)
            self._expect("]")
            return algebra.generator(position, self.field)
        handler = self.functions.get(token.text)
        if handler is None:
            raise ExpressionParseError(f"Unknown name {token.text!r}", token.position)
        self._expect("(")
        arguments = [self._expression()]
        while self.current.text == ",":
            self._advance()
            arguments.append(self._expression())
        self._expect(")")
        return handler(arguments, token)

    def _arity(self, arguments: List[TernaryElement], count: int, token: Token) -> None:
        if len(arguments) != count:
            raise ExpressionParseError(
                f"{token.text}() takes {count} argument(s), got {len(arguments)}", token.position
            )

    def _grade_argument(self, value: TernaryElement, token: Token) -> int:
        scalar_value = complex(algebra.body(value)) if value.is_scalar else None
        if scalar_value is None or scalar_value.imag != 0 or scalar_value.real != int(scalar_value.real):
            raise ExpressionParseError(f"{token.text}() expects an integer grade", token.position)
        return int(scalar_value.real)

    def _call_inverse(self, arguments: List[TernaryElement], token: Token) -> TernaryElement:
        self._arity(arguments, 1, token)
        return algebra.inverse(arguments[0], self.floor)

    def _call_conj(self, arguments: List[TernaryElement], token: Token) -> TernaryElement:
        self._arity(arguments, 1, token)
        return algebra.conj(arguments[0])

    def _call_grade(self, arguments: List[TernaryElement], token: Token) -> TernaryElement:
        self._arity(arguments, 2, token)
        k = self._grade_argument(arguments[0], token)
        if k < 0:
            raise ExpressionParseError("grade() expects a non-negative grade", token.position)
        return algebra.grade_project(arguments[1], k)

    def _call_z3(self, arguments: List[TernaryElement], token: Token) -> TernaryElement:
        self._arity(arguments, 2, token)
        k = self._grade_argument(arguments[0], token)
        if k not in (0, 1, 2):
            raise ExpressionParseError("z3() expects a component 0, 1 or 2", token.position)
        return algebra.z3_component(arguments[1], k)


def evaluate(text: str, field: CoefficientField = EXACT, floor: float = INVERSE_FLOOR) -> TernaryElement:
    """
    Evaluate an element expression.

    Args:
        text: Expression such as ``inv(1 + e[1])`` or ``grade(0, conj(e[1])*e[1])``
        field: Coefficient field (exact by default)
        floor: Smallest body modulus inv() and '/' accept in float mode

    Returns:
        The evaluated element

    Raises:
        ExpressionParseError: On syntax errors, carrying the 0-based position
        NotInvertible: When inv() or '/' meets a zero body (or one below floor)
    """
    return ExpressionEvaluator(text, field, floor).parse()

