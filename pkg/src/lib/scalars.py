"""Exact and floating coefficient arithmetic for the ternary algebra.

All structure constants of the algebra are powers of w = exp(2*pi*i/3), so the
exact coefficient field is Q(i, w): a Gaussian-rational combination
``p + i*q`` of two elements ``p, q`` of Q(w). Floating mode uses Python
``complex`` with a normalization threshold for dropping terms.
"""

from __future__ import annotations

import cmath
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from numbers import Complex, Rational
from typing import Any, Union

OMEGA_COMPLEX = cmath.exp(2j * math.pi / 3)
OMEGA_POWERS = (1 + 0j, OMEGA_COMPLEX, OMEGA_COMPLEX * OMEGA_COMPLEX)

RationalLike = Union[int, Fraction]


def _as_rational(value: Any) -> RationalLike:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"Cannot represent {value!r} exactly")
        return Fraction(value)
    raise TypeError(f"Expected a rational number, got {type(value).__name__}")


class Cyclotomic:
    """Element ``a + b*w`` of Q(w); w**3 = 1 and 1 + w + w**2 = 0."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: Any = 0, b: Any = 0) -> None:
        self._a = _as_rational(a)
        self._b = _as_rational(b)

    @property
    def a(self) -> RationalLike:
        return self._a

    @property
    def b(self) -> RationalLike:
        return self._b

    @classmethod
    def omega_power(cls, k: int) -> Cyclotomic:
        k %= 3
        if k == 0:
            return cls(1, 0)
        if k == 1:
            return cls(0, 1)
        return cls(-1, -1)

    @property
    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def phase_exponent(self):
        """Return k when this value is exactly w**k, otherwise None."""
        for k in range(3):
            if self == Cyclotomic.omega_power(k):
                return k
        return None

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"Cyclotomic({self._a}, {self._b})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Cyclotomic):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Cyclotomic", self._a, self._b))

    def _coerce(self, other: Any) -> Cyclotomic:
        if isinstance(other, Cyclotomic):
            return other
        return Cyclotomic(other, 0)

    def __add__(self, other: Any) -> Cyclotomic:
        if isinstance(other, (ExactScalar, complex, float)):
            return NotImplemented
        other = self._coerce(other)
        return Cyclotomic(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(-self._a, -self._b)

    def __sub__(self, other: Any) -> Cyclotomic:
        if isinstance(other, (ExactScalar, complex, float)):
            return NotImplemented
        other = self._coerce(other)
        return Cyclotomic(self._a - other._a, self._b - other._b)

    def __rsub__(self, other: Any) -> Cyclotomic:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> Cyclotomic:
        if isinstance(other, (ExactScalar, complex, float)):
            return NotImplemented
        other = self._coerce(other)
        a, b, c, d = self._a, self._b, other._a, other._b
        # (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, w^2 = -1 - w
        bd = b * d
        return Cyclotomic(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def times_omega(self, k: int) -> Cyclotomic:
        """Multiply by w**k without a general product."""
        a, b = self._a, self._b
        for _ in range(k % 3):
            a, b = -b, a - b
        return Cyclotomic(a, b)

    def conjugate(self) -> Cyclotomic:
        # conj(w) = w^2 = -1 - w
        return Cyclotomic(self._a - self._b, -self._b)

    def norm(self) -> RationalLike:
        """Field norm a^2 - ab + b^2, zero only for the zero element."""
        a, b = self._a, self._b
        return a * a - a * b + b * b

    def inverse(self) -> Cyclotomic:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Cyclotomic zero has no inverse")
        conj = self.conjugate()
        return Cyclotomic(Fraction(conj._a) / n, Fraction(conj._b) / n)

    def __truediv__(self, other: Any) -> Cyclotomic:
        other = self._coerce(other)
        return self * other.inverse()

    def __complex__(self) -> complex:
        return complex(self._a) + complex(self._b) * OMEGA_COMPLEX

    def __abs__(self) -> float:
        return math.sqrt(float(self.norm()))


Cyclotomic.ZERO = Cyclotomic(0, 0)  # type: ignore[attr-defined]
Cyclotomic.ONE = Cyclotomic(1, 0)  # type: ignore[attr-defined]
Cyclotomic.OMEGA = Cyclotomic(0, 1)  # type: ignore[attr-defined]
Cyclotomic.OMEGA2 = Cyclotomic(-1, -1)  # type: ignore[attr-defined]


class ExactScalar:
    """Exact element ``p + i*q`` of Q(i, w) with ``p, q`` in Q(w)."""

    __slots__ = ("_p", "_q")

    def __init__(self, p: Any = 0, q: Any = 0) -> None:
        self._p = p if isinstance(p, Cyclotomic) else Cyclotomic(p, 0)
        self._q = q if isinstance(q, Cyclotomic) else Cyclotomic(q, 0)

    @property
    def p(self) -> Cyclotomic:
        return self._p

    @property
    def q(self) -> Cyclotomic:
        return self._q

    @classmethod
    def from_number(cls, value: Any) -> ExactScalar:
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, Cyclotomic):
            return cls(value, Cyclotomic.ZERO)
        if isinstance(value, (bool, int, Fraction, float)) or isinstance(value, Rational):
            return cls(Cyclotomic(value, 0), Cyclotomic.ZERO)
        if isinstance(value, Complex):
            value = complex(value)
            return cls(Cyclotomic(value.real, 0), Cyclotomic(value.imag, 0))
        raise TypeError(f"Cannot convert {type(value).__name__} to an exact coefficient")

    @classmethod
    def omega_power(cls, k: int) -> ExactScalar:
        return cls(Cyclotomic.omega_power(k), Cyclotomic.ZERO)

    @property
    def is_zero(self) -> bool:
        return self._p.is_zero and self._q.is_zero

    def is_rational(self) -> bool:
        return self._q.is_zero and self._p.b == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"ExactScalar({self._p!r}, {self._q!r})"

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ExactScalar):
            return self._p == other._p and self._q == other._q
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self == ExactScalar.from_number(other)
        if isinstance(other, complex):
            try:
                return self == ExactScalar.from_number(other)
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self) -> int:
        if self._q.is_zero and self._p.b == 0:
            return hash(self._p.a)
        return hash(("ExactScalar", self._p, self._q))

    @staticmethod
    def _coerce(other: Any) -> ExactScalar:
        return ExactScalar.from_number(other)

    def __add__(self, other: Any) -> ExactScalar:
        other = self._coerce(other)
        return ExactScalar(self._p + other._p, self._q + other._q)

    __radd__ = __add__

    def __neg__(self) -> ExactScalar:
        return ExactScalar(-self._p, -self._q)

    def __sub__(self, other: Any) -> ExactScalar:
        other = self._coerce(other)
        return ExactScalar(self._p - other._p, self._q - other._q)

    def __rsub__(self, other: Any) -> ExactScalar:
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> ExactScalar:
        other = self._coerce(other)
        p, q, r, s = self._p, self._q, other._p, other._q
        if q.is_zero and s.is_zero:
            return ExactScalar(p * r, Cyclotomic.ZERO)
        return ExactScalar(p * r - q * s, p * s + q * r)

    __rmul__ = __mul__

    def times_omega(self, k: int) -> ExactScalar:
        if k % 3 == 0:
            return self
        return ExactScalar(self._p.times_omega(k), self._q.times_omega(k))

    def conjugate(self) -> ExactScalar:
        return ExactScalar(self._p.conjugate(), -self._q.conjugate())

    def inverse(self) -> ExactScalar:
        if self.is_zero:
            raise ZeroDivisionError("Exact zero has no inverse")
        # 1/(p + iq) = (p - iq) / (p^2 + q^2); p^2 + q^2 != 0 since i -> -i fixes Q(w)
        denominator = (self._p * self._p + self._q * self._q).inverse()
        return ExactScalar(self._p * denominator, -(self._q * denominator))

    def __truediv__(self, other: Any) -> ExactScalar:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> ExactScalar:
        return self._coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> ExactScalar:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ExactScalar(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __complex__(self) -> complex:
        return complex(self._p) + 1j * complex(self._q)

    def __abs__(self) -> float:
        return abs(complex(self))


class CoefficientField(ABC):
    """Arithmetic policy shared by every coefficient of one element."""

    name: str = ""

    @property
    @abstractmethod
    def zero(self) -> Any:
        ...

    @property
    @abstractmethod
    def one(self) -> Any:
        ...

    @abstractmethod
    def coerce(self, value: Any) -> Any:
        """Convert a number into this field's native coefficient type."""

    @abstractmethod
    def is_zero(self, value: Any) -> bool:
        ...

    @abstractmethod
    def times_phase(self, value: Any, k: int) -> Any:
        """Return value * w**k."""

    @abstractmethod
    def inverse(self, value: Any) -> Any:
        ...

    def to_complex(self, value: Any) -> complex:
        return complex(value)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CoefficientField) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class ExactField(CoefficientField):
    """Exact Q(i, w) coefficients; every algebra law holds with equality."""

    name = "exact"

    @property
    def zero(self) -> ExactScalar:
        return ExactScalar(0)

    @property
    def one(self) -> ExactScalar:
        return ExactScalar(1)

    def coerce(self, value: Any) -> ExactScalar:
        return ExactScalar.from_number(value)

    def is_zero(self, value: ExactScalar) -> bool:
        return value.is_zero

    def times_phase(self, value: ExactScalar, k: int) -> ExactScalar:
        return value.times_omega(k)

    def inverse(self, value: ExactScalar) -> ExactScalar:
        return value.inverse()


class FloatField(CoefficientField):
    """Double-precision complex coefficients; terms below ``threshold`` are dropped."""

    name = "float"

    def __init__(self, threshold: float = 1e-14) -> None:
        self.threshold = threshold

    @property
    def zero(self) -> complex:
        return 0j

    @property
    def one(self) -> complex:
        return 1 + 0j

    def coerce(self, value: Any) -> complex:
        return complex(value)

    def is_zero(self, value: complex) -> bool:
        return abs(value) <= self.threshold

    def times_phase(self, value: complex, k: int) -> complex:
        return value * OMEGA_POWERS[k % 3]

    def inverse(self, value: complex) -> complex:
        return 1.0 / value

    def __repr__(self) -> str:
        return f"FloatField(threshold={self.threshold!r})"


EXACT = ExactField()
FLOAT = FloatField()


def field_for(mode: str) -> CoefficientField:
    """
    Look up a coefficient field by name.

    Args:
        mode: 'exact' or 'float'

    Returns:
        The shared field instance
    """
    if mode == EXACT.name:
        return EXACT
    if mode == FLOAT.name:
        return FLOAT
    raise ValueError(f"Unknown coefficient mode: {mode!r} (expected 'exact' or 'float')")
