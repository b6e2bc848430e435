"""Multiplication operators, their l2-adjoints and Berezin integration."""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List

import numpy as np
import pandas as pd

from src.lib import algebra
from src.lib.algebra import TernaryElement
from src.lib.multi_index import MultiIndex, basis_indices, sigma_exponent
from src.lib.scalars import EXACT, CoefficientField, FloatField

MUL = "mul"
ADJOINT = "adjoint"


def mul_op(nu: MultiIndex, g: TernaryElement) -> TernaryElement:
    """
    M_nu g: e^mu -> sigma(nu, mu) e^(nu+mu), extended linearly.

    Args:
        nu: Multi-index of the multiplier
        g: Operand

    Returns:
        e^nu g; terms with an exponent reaching 3 vanish
    """
    return algebra.mul(algebra.monomial(nu, 1, g.field), g)


def adjoint_op(nu: MultiIndex, g: TernaryElement) -> TernaryElement:
    """
    M*_nu g: e^mu -> conj(sigma(nu, mu - nu)) e^(mu - nu), extended linearly.

    Terms with mu - nu outside {0,1,2}^N are dropped.
    """
    field = g.field
    accumulated: Dict[MultiIndex, Any] = {}
    for mu, value in g.items():
        rest = mu.minus(nu)
        if rest is None:
            continue
        k = sigma_exponent(nu, rest)
        # nu + rest = mu is admissible, so k is never None
        accumulated[rest] = field.times_phase(value, -k % 3)  # type: ignore[operator]
    return TernaryElement._build(accumulated, field)


def berezin_integral(nu: MultiIndex, g: TernaryElement) -> TernaryElement:
    """Integral of g against d e^nu, defined as M*_nu g."""
    return adjoint_op(nu, g)


def adjoint_full(f: TernaryElement, g: TernaryElement) -> TernaryElement:
    """
    M*_f g = sum conj(f_nu) g_mu conj(sigma(nu, mu - nu)) e^(mu - nu).

    M*_f 1 = conj(f0).
    """
    f, g = algebra.unify(f, g)
    total = algebra.zero(g.field)
    for nu, value in f.items():
        total = algebra.add(total, algebra.scale(value.conjugate(), adjoint_op(nu, g)))
    return total


@dataclass(frozen=True)
class MonomialOperator:
    """M_nu (kind 'mul') or M*_nu (kind 'adjoint') acting on elements."""

    kind: str
    index: MultiIndex

    def __post_init__(self) -> None:
        if self.kind not in _OPERATORS:
            raise ValueError(f"Operator kind must be {MUL!r} or {ADJOINT!r}, got {self.kind!r}")

    @property
    def is_identity(self) -> bool:
        return self.index.is_empty

    def apply(self, g: TernaryElement) -> TernaryElement:
        return _OPERATORS[self.kind](self.index, g)

    def __call__(self, g: TernaryElement) -> TernaryElement:
        return self.apply(g)

    def factors(self) -> List["MonomialOperator"]:
        """Single-slot operators for e_j**nu_j in increasing position order."""
        return [MonomialOperator(self.kind, MultiIndex([entry])) for entry in self.index]

    def compose(self, g: TernaryElement) -> TernaryElement:
        """
        Apply through the single-slot factors.

        M_nu = M_nu1 o M_nu2 o ... (the highest position acts first), while
        M*_nu = M*_nud o ... o M*_nu1 (the lowest position acts first).
        """
        factors = self.factors()
        if self.kind == MUL:
            factors.reverse()
        for operator in factors:
            g = operator.apply(g)
        return g


_OPERATORS: Dict[str, Callable[[MultiIndex, TernaryElement], TernaryElement]] = {
    MUL: mul_op,
    ADJOINT: adjoint_op,
}


def basis(d: int, field: CoefficientField = EXACT) -> List[TernaryElement]:
    """The 3**d monomials of G_3,d in canonical order."""
    return [algebra.monomial(index, 1, field) for index in basis_indices(d)]


def operator_matrix(kind: str, nu: MultiIndex, d: int, field: CoefficientField = EXACT) -> np.ndarray:
    """
    Matrix of M_nu or M*_nu in the monomial basis of G_3,d.

    Column j holds the image of the j-th basis monomial. Exact fields give an
    object array of exact coefficients, float fields a complex array.

    Args:
        kind: 'mul' or 'adjoint'
        nu: Multi-index supported in 1..d
        d: Dimension (3**d x 3**d matrix)
        field: Coefficient field

    Returns:
        The operator matrix
    """
    if not nu.supported_within(d):
        raise ValueError(f"Index {nu} is supported beyond position {d}")
    operator = MonomialOperator(kind, nu)
    indices = basis_indices(d)
    position = {index: row for row, index in enumerate(indices)}
    size = len(indices)
    if isinstance(field, FloatField):
        matrix = np.zeros((size, size), dtype=complex)
    else:
        matrix = np.full((size, size), field.zero, dtype=object)
    for column, index in enumerate(indices):
        image = operator.apply(algebra.monomial(index, 1, field))
        for target, value in image.items():
            matrix[position[target], column] = value
    return matrix


def conjugate_transpose(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose that also handles object arrays of exact scalars."""
    if matrix.dtype == object:
        conjugated = np.empty_like(matrix)
        for position, value in np.ndenumerate(matrix):
            conjugated[position] = value.conjugate()
        return conjugated.T
    return matrix.conj().T


def kernel_terms(f: TernaryElement, g: TernaryElement) -> List[MultiIndex]:
    """Basis terms of g annihilated by left multiplication with f."""
    return [index for index in g.indices() if algebra.mul(f, algebra.monomial(index, 1, f.field)).is_zero]


def admissibility_table(kind: str) -> pd.DataFrame:
    """
    Single-slot support pattern: rows nu_j, columns mu_j, True where
    M_nu (or M*_nu) keeps e_1**mu_j.
    """
    operator_for = _OPERATORS[kind]
    table = {}
    for mu_j in range(3):
        column = []
        target = MultiIndex([(1, mu_j)])
        for nu_j in range(3):
            image = operator_for(MultiIndex([(1, nu_j)]), algebra.monomial(target))
            column.append(not image.is_zero)
        table[mu_j] = column
    frame = pd.DataFrame(table, index=range(3))
    frame.index.name = "nu_j"
    frame.columns.name = "mu_j"
    return frame

