"""Sparse arithmetic in the ternary Grassmann algebra G_3 (finite-support limit of G_{3,d})."""

from __future__ import annotations

import logging
from types import MappingProxyType
from typing import Any, Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from src.lib.multi_index import EMPTY, MultiIndex, sigma_exponent
from src.lib.scalars import EXACT, FLOAT, CoefficientField, FloatField
from src.utils.config import DEFAULT_CONFIG
from src.utils.error_handlers import NotInvertible

logger = logging.getLogger(__name__)

# Below this body modulus the Neumann series amplifies 1/z0 powers beyond double precision.
INVERSE_FLOOR = DEFAULT_CONFIG.inverse_floor

PhaseRule = Callable[[MultiIndex, MultiIndex], Optional[int]]


class TernaryElement:
    """
    Finite sparse sum z = sum_nu z_nu e^nu.

    Immutable; terms are kept in canonical graded-lexicographic order and no
    stored coefficient is zero (below the float threshold in float mode).
    """

    __slots__ = ("_terms", "_field")

    def __init__(
        self,
        terms: Union[Mapping[MultiIndex, Any], Iterable[Tuple[MultiIndex, Any]]] = (),
        field: CoefficientField = EXACT,
    ) -> None:
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        accumulated: Dict[MultiIndex, Any] = {}
        for index, coefficient in pairs:
            if not isinstance(index, MultiIndex):
                index = MultiIndex(index)
            value = field.coerce(coefficient)
            if index in accumulated:
                accumulated[index] = accumulated[index] + value
            else:
                accumulated[index] = value
        self._field = field
        self._terms = _normalized(accumulated, field)

    @classmethod
    def _build(cls, accumulated: Dict[MultiIndex, Any], field: CoefficientField) -> TernaryElement:
        element = cls.__new__(cls)
        element._field = field
        element._terms = _normalized(accumulated, field)
        return element

    @property
    def field(self) -> CoefficientField:
        return self._field

    @property
    def terms(self) -> Mapping[MultiIndex, Any]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def indices(self) -> List[MultiIndex]:
        return list(self._terms)

    def coefficient(self, index: MultiIndex) -> Any:
        return self._terms.get(index, self._field.zero)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_scalar(self) -> bool:
        return all(index.is_empty for index in self._terms)

    @property
    def max_position(self) -> int:
        return max((index.max_position for index in self._terms), default=0)

    @property
    def max_grade(self) -> int:
        return max((index.grade for index in self._terms), default=0)

    def to_float(self, field: Optional[FloatField] = None) -> TernaryElement:
        target = field or FLOAT
        return TernaryElement._build({index: complex(value) for index, value in self._terms.items()}, target)

    def to_exact(self) -> TernaryElement:
        if self._field == EXACT:
            return self
        return TernaryElement(self._terms, EXACT)

    def isclose(self, other: TernaryElement, tolerance: float = 1e-10) -> bool:
        """Coefficient-wise comparison within ``tolerance`` (any coefficient mode)."""
        difference = add(self, scale(-1, other))
        return all(abs(complex(value)) <= tolerance for _, value in difference.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[MultiIndex, Any]]:
        return iter(self._terms.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TernaryElement):
            left, right = unify(self, other)
            if len(left._terms) != len(right._terms):
                return False
            return all(
                index in right._terms and right._terms[index] == value
                for index, value in left._terms.items()
            )
        if isinstance(other, (int, float, complex)):
            return self == scalar(other, self._field)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple((index, complex(value)) for index, value in self._terms.items()))

    def __add__(self, other: Any) -> TernaryElement:
        return add(self, _as_element(other, self._field))

    def __radd__(self, other: Any) -> TernaryElement:
        return add(_as_element(other, self._field), self)

    def __neg__(self) -> TernaryElement:
        return scale(-1, self)

    def __sub__(self, other: Any) -> TernaryElement:
        return add(self, scale(-1, _as_element(other, self._field)))

    def __rsub__(self, other: Any) -> TernaryElement:
        return add(_as_element(other, self._field), scale(-1, self))

    def __mul__(self, other: Any) -> TernaryElement:
        if isinstance(other, TernaryElement):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other: Any) -> TernaryElement:
        return scale(other, self)

    def __pow__(self, exponent: int) -> TernaryElement:
        return power(self, exponent)

    def __repr__(self) -> str:
        return f"TernaryElement({str(self)!r}, field={self._field.name!r})"

    def __str__(self) -> str:
        from src.lib.element_io import format_element

        return format_element(self)


def _normalized(accumulated: Dict[MultiIndex, Any], field: CoefficientField) -> Dict[MultiIndex, Any]:
    kept = [(index, value) for index, value in accumulated.items() if not field.is_zero(value)]
    kept.sort(key=lambda pair: pair[0].sort_key())
    return dict(kept)


def _as_element(value: Any, field: CoefficientField) -> TernaryElement:
    if isinstance(value, TernaryElement):
        return value
    return scalar(value, field)


def unify(z: TernaryElement, w: TernaryElement) -> Tuple[TernaryElement, TernaryElement]:
    """Bring two elements to a common coefficient field (exact promotes to float)."""
    if z.field == w.field:
        return z, w
    target = z.field if isinstance(z.field, FloatField) else w.field
    return z.to_float(target), w.to_float(target)  # type: ignore[arg-type]


def scalar(value: Any, field: CoefficientField = EXACT) -> TernaryElement:
    return TernaryElement({EMPTY: value}, field)


def zero(field: CoefficientField = EXACT) -> TernaryElement:
    return TernaryElement((), field)


def one(field: CoefficientField = EXACT) -> TernaryElement:
    return scalar(1, field)


def generator(position: int, field: CoefficientField = EXACT) -> TernaryElement:
    """The generator e_position."""
    return TernaryElement({MultiIndex.generator(position): 1}, field)


def monomial(index: MultiIndex, coefficient: Any = 1, field: CoefficientField = EXACT) -> TernaryElement:
    return TernaryElement({index: coefficient}, field)


def mul(z: TernaryElement, w: TernaryElement, rule: PhaseRule = sigma_exponent) -> TernaryElement:
    """
    Product z w = sum sigma(nu, mu) z_nu w_mu e^(nu+mu).

    Args:
        z: Left factor
        w: Right factor
        rule: Exponent of the structure phase (None for a vanishing pair)

    Returns:
        Normalized product; pairs with an exponent reaching 3 vanish
    """
    z, w = unify(z, w)
    field = z.field
    accumulated: Dict[MultiIndex, Any] = {}
    for nu, a in z.items():
        for mu, b in w.items():
            k = rule(nu, mu)
            if k is None:
                continue
            gamma = nu.plus(mu)
            value = field.times_phase(a * b, k)
            if gamma in accumulated:
                accumulated[gamma] = accumulated[gamma] + value
            else:
                accumulated[gamma] = value
    return TernaryElement._build(accumulated, field)


def add(z: TernaryElement, w: TernaryElement) -> TernaryElement:
    z, w = unify(z, w)
    accumulated = dict(z.items())
    for index, value in w.items():
        accumulated[index] = accumulated[index] + value if index in accumulated else value
    return TernaryElement._build(accumulated, z.field)


def sub(z: TernaryElement, w: TernaryElement) -> TernaryElement:
    return add(z, scale(-1, w))


def scale(c: Any, z: TernaryElement) -> TernaryElement:
    """Multiply every coefficient by the scalar c (scalars are central)."""
    field = z.field
    factor = field.coerce(c)
    return TernaryElement._build({index: value * factor for index, value in z.items()}, field)


def power(z: TernaryElement, exponent: int) -> TernaryElement:
    if exponent < 0:
        return power(inverse(z), -exponent)
    result = one(z.field)
    for _ in range(exponent):
        result = mul(result, z)
    return result


def grade_project(z: TernaryElement, k: int) -> TernaryElement:
    """The k-blade [z]_k: terms with |nu| = k."""
    if k < 0:
        raise ValueError(f"Grade must be non-negative, got {k}")
    return TernaryElement._build({index: value for index, value in z.items() if index.grade == k}, z.field)


def blades(z: TernaryElement) -> Dict[int, TernaryElement]:
    """Every non-empty blade of z keyed by grade."""
    grades = sorted({index.grade for index in z.indices()})
    return {k: grade_project(z, k) for k in grades}


def z3_component(z: TernaryElement, k: int) -> TernaryElement:
    """Component of z in G^k: terms with |nu| = k (mod 3)."""
    if k not in (0, 1, 2):
        raise ValueError(f"Z3 component must be 0, 1 or 2, got {k}")
    return TernaryElement._build({index: value for index, value in z.items() if index.grade % 3 == k}, z.field)


def ternary_form(i: int, j: int, k: int, field: CoefficientField = EXACT) -> TernaryElement:
    """
    T(e_i, e_j, e_k) = e_i{e_j, e_k} + e_j{e_k, e_i} + e_k{e_i, e_j}.

    Expanded as the sum of the six ordered products; vanishes identically.
    """
    if not 1 <= i <= j <= k:
        raise ValueError(f"Ternary form expects 1 <= i <= j <= k, got ({i}, {j}, {k})")
    a, b, c = generator(i, field), generator(j, field), generator(k, field)
    total = zero(field)
    for x, y, w in ((a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)):
        total = add(total, mul(mul(x, y), w))
    return total


def conj(z: TernaryElement) -> TernaryElement:
    """
    Pseudo-conjugation: conj(z_nu) sigma(nu, nu) e^(2 nu) for binary nu, 0 otherwise.

    Not an involution: conj(e_j) = e_j^2 and conj(e_j^2) = 0.
    """
    field = z.field
    accumulated: Dict[MultiIndex, Any] = {}
    for nu, value in z.items():
        doubled = nu.doubled()
        if doubled is None:
            continue
        k = sigma_exponent(nu, nu)
        accumulated[doubled] = field.times_phase(value.conjugate(), k)  # type: ignore[arg-type]
    return TernaryElement._build(accumulated, field)


def body(z: TernaryElement) -> Any:
    """Scalar part z_0."""
    return z.coefficient(EMPTY)


def soul(z: TernaryElement) -> TernaryElement:
    """Nilpotent remainder z - z_0."""
    return TernaryElement._build({index: value for index, value in z.items() if not index.is_empty}, z.field)


def project_pn(z: TernaryElement, n: int, d: int) -> TernaryElement:
    """
    P_n: keep the terms supported on positions 1..d-n.

    Args:
        z: Element supported in positions 1..d
        n: Number of trailing generators removed (0 <= n <= d)
        d: Ambient dimension

    Returns:
        The projection onto G_{3,d-n}; P_d(z) is the body of z
    """
    if n < 0 or n > d:
        raise ValueError(f"Projector index must satisfy 0 <= n <= d, got n={n}, d={d}")
    if z.max_position > d:
        raise ValueError(f"Element is supported beyond position {d}")
    keep = d - n
    return TernaryElement._build({index: value for index, value in z.items() if index.max_position <= keep}, z.field)


def identity_projector(n: int, d: int, field: CoefficientField = EXACT) -> TernaryElement:
    """I_n = e_{d-n+1}^2 ... e_d^2, the element whose right action realises P_n."""
    if n < 1 or n > d:
        raise ValueError(f"I_n requires 1 <= n <= d, got n={n}, d={d}")
    return monomial(MultiIndex((position, 2) for position in range(d - n + 1, d + 1)), 1, field)


def nilpotency_index(z: TernaryElement) -> int:
    """
    Least m >= 1 with soul(z)^m = 0, found by iterated multiplication.

    Bounded by 2d + 1 where d is the largest occupied position.
    """
    remainder = soul(z)
    if remainder.is_zero:
        return 1
    bound = 2 * remainder.max_position + 1
    current = remainder
    m = 1
    while not current.is_zero:
        current = mul(current, remainder)
        m += 1
        if m > bound:
            raise RuntimeError(f"Nilpotency index exceeded the bound {bound}")
    return m


def is_invertible(z: TernaryElement, floor: float = INVERSE_FLOOR) -> bool:
    b = body(z)
    if isinstance(z.field, FloatField):
        return abs(b) > floor
    return not z.field.is_zero(b)


def inverse(z: TernaryElement, floor: float = INVERSE_FLOOR) -> TernaryElement:
    """
    z^-1 = sum_{k < m} (-1)^k soul^k / z_0^(k+1), m the nilpotency index.

    Raises:
        NotInvertible: When the body is zero (or below ``floor`` in float mode)
    """
    if not is_invertible(z, floor):
        raise NotInvertible(f"Element with scalar part {body(z)!r} is not invertible")
    field = z.field
    b0 = field.coerce(body(z))
    b0_inv = field.inverse(b0)
    remainder = soul(z)
    m = nilpotency_index(z)
    # sum_k (-soul/z0)^k, then divide by z0
    step = scale(-b0_inv, remainder)
    term = one(field)
    total = one(field)
    for _ in range(1, m):
        term = mul(term, step)
        total = add(total, term)
    logger.debug("inverse: nilpotency index %d, %d terms", m, len(total))
    return scale(b0_inv, total)


def l2_inner(z: TernaryElement, w: TernaryElement) -> complex:
    """<z, w> = sum z_nu conj(w_nu); exact values are returned as complex."""
    total = 0j
    for index, value in z.items():
        other = w.coefficient(index)
        total += complex(value) * complex(other).conjugate()
    return total


def l2_inner_exact(z: TernaryElement, w: TernaryElement) -> Any:
    """Exact sesquilinear pairing for exact-mode elements."""
    z, w = unify(z, w)
    total = z.field.zero
    for index, value in z.items():
        if index in w.terms:
            total = total + value * w.terms[index].conjugate()
    return total


def cube_of_vector(z: TernaryElement) -> TernaryElement:
    """z^3 for a grade-1 element; always 0."""
    if not z.is_zero and grade_project(z, 1) != z:
        raise ValueError("cube_of_vector expects a grade-1 element")
    return mul(mul(z, z), z)


def decompose_last(z: TernaryElement, d: int) -> Tuple[TernaryElement, TernaryElement, TernaryElement]:
    """
    Split z = A + B e_d + C e_d^2 with A, B, C supported in positions 1..d-1.

    The ordering e^nu = ... e_d^k puts e_d last, so B and C carry the
    coefficients unchanged.
    """
    if d < 1 or z.max_position > d:
        raise ValueError(f"Element must be supported in positions 1..{d}")
    parts: Tuple[Dict[MultiIndex, Any], ...] = ({}, {}, {})
    for index, value in z.items():
        k = index.exponent(d)
        parts[k][index.restricted(d - 1)] = value
    field = z.field
    return tuple(TernaryElement._build(part, field) for part in parts)  # type: ignore[return-value]


def commute_generator(a: TernaryElement, d: int) -> TernaryElement:
    """A' with A e_d = e_d A' for A supported in 1..d-1: coefficients twisted by w^|nu|."""
    if a.max_position >= d:
        raise ValueError(f"Element must be supported in positions 1..{d - 1}")
    field = a.field
    return TernaryElement._build({index: field.times_phase(value, index.grade) for index, value in a.items()}, field)


def anti_multiplicative_conj_check(a: TernaryElement, b: TernaryElement) -> bool:
    """True when conj(ab) = conj(b) conj(a); holds for monomials a, b."""
    return conj(mul(a, b)) == mul(conj(b), conj(a))
