"""Unit tests for multiplication operators, adjoints and Berezin integration."""

import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from src.lib import algebra
from src.lib.algebra import TernaryElement
from src.lib.berezin import (
    ADJOINT,
    MUL,
    MonomialOperator,
    adjoint_full,
    adjoint_op,
    admissibility_table,
    basis,
    berezin_integral,
    conjugate_transpose,
    kernel_terms,
    mul_op,
    operator_matrix,
)
from src.lib.multi_index import EMPTY, MultiIndex, basis_indices
from src.lib.scalars import EXACT, FLOAT, ExactScalar

coefficients = st.builds(ExactScalar, st.integers(-3, 3), st.integers(-3, 3))
indices = st.lists(st.integers(0, 2), min_size=1, max_size=3).map(lambda xs: MultiIndex.from_exponents(tuple(xs)))
elements = st.lists(st.tuples(indices, coefficients), max_size=4).map(lambda terms: TernaryElement(terms, EXACT))


def e(*entries):
    return MultiIndex(entries)


class TestMonomialOperators(unittest.TestCase):
    """Test cases for M_nu and M*_nu on monomials."""

    def test_mul_op(self):
        self.assertEqual(mul_op(e((1, 1)), algebra.one()), algebra.generator(1))
        self.assertTrue(mul_op(e((1, 1)), algebra.monomial(e((1, 2)))).is_zero)

    def test_adjoint_op(self):
        self.assertEqual(adjoint_op(e((1, 1)), algebra.generator(1)), algebra.one())
        self.assertTrue(adjoint_op(e((1, 1)), algebra.generator(2)).is_zero)
        self.assertEqual(adjoint_op(e((1, 1)), algebra.monomial(e((1, 1), (2, 1)))), algebra.generator(2))
        self.assertEqual(
            adjoint_op(e((2, 1)), algebra.monomial(e((1, 1), (2, 1)))),
            algebra.scale(ExactScalar.omega_power(1), algebra.generator(1)),
        )

    def test_berezin_reproduces_coefficient(self):
        coefficient = ExactScalar(2, 1)
        for nu in basis_indices(2):
            self.assertEqual(berezin_integral(nu, algebra.monomial(nu, coefficient)), algebra.scalar(coefficient))

    def test_composition_matches_direct_application(self):
        targets = basis(2)
        for nu in basis_indices(2):
            for kind in (MUL, ADJOINT):
                operator = MonomialOperator(kind, nu)
                for g in targets:
                    self.assertEqual(operator.compose(g), operator(g), f"{kind} {nu} on {g}")

    def test_invalid_kind(self):
        with self.assertRaises(ValueError):
            MonomialOperator("transpose", EMPTY)

    def test_admissibility_tables(self):
        mul_table = admissibility_table(MUL)
        adjoint_table = admissibility_table(ADJOINT)
        self.assertEqual(mul_table.values.tolist(), [[True, True, True], [True, True, False], [True, False, False]])
        self.assertEqual(
            adjoint_table.values.tolist(), [[True, True, True], [False, True, True], [False, False, True]]
        )
        self.assertEqual(mul_table.index.name, "nu_j")

    def test_kernel_terms(self):
        g = algebra.one() + algebra.generator(1) + algebra.monomial(e((1, 2))) + algebra.generator(2)
        self.assertEqual(kernel_terms(algebra.generator(1), g), [e((1, 2))])


class TestAdjointness(unittest.TestCase):
    """Test cases for <M_nu g, h> = <g, M*_nu h>."""

    def assertMatricesEqual(self, left, right):
        self.assertEqual(left.shape, right.shape)
        mismatches = [(a, b) for a, b in zip(left.flat, right.flat) if not a == b]
        self.assertEqual(mismatches, [])

    def test_exact_matrices_up_to_d3(self):
        for d in (1, 2, 3):
            for nu in basis_indices(d):
                mul_matrix = operator_matrix(MUL, nu, d)
                adjoint_matrix = operator_matrix(ADJOINT, nu, d)
                self.assertMatricesEqual(adjoint_matrix, conjugate_transpose(mul_matrix))

    def test_exact_matrix_d4(self):
        nu = e((1, 1), (2, 2), (4, 1))
        mul_matrix = operator_matrix(MUL, nu, 4)
        self.assertEqual(mul_matrix.shape, (81, 81))
        self.assertMatricesEqual(operator_matrix(ADJOINT, nu, 4), conjugate_transpose(mul_matrix))

    def test_float_matrices(self):
        nu = e((1, 1), (2, 1))
        mul_matrix = operator_matrix(MUL, nu, 2, FLOAT)
        self.assertEqual(mul_matrix.dtype, np.complex128)
        np.testing.assert_allclose(operator_matrix(ADJOINT, nu, 2, FLOAT), mul_matrix.conj().T, atol=1e-15)

    def test_support_beyond_dimension(self):
        with self.assertRaises(ValueError):
            operator_matrix(MUL, e((3, 1)), 2)

    @settings(max_examples=100, deadline=None)
    @given(elements, elements, elements)
    def test_full_adjoint(self, f, g, h):
        left = algebra.l2_inner_exact(algebra.mul(f, g), h)
        right = algebra.l2_inner_exact(g, adjoint_full(f, h))
        self.assertEqual(left, right)

    def test_adjoint_of_scalar(self):
        g = algebra.generator(1) + algebra.scalar(3)
        f = algebra.scalar(ExactScalar(1, 2)) + algebra.generator(2)
        self.assertEqual(adjoint_full(algebra.one(), g), g)
        self.assertEqual(adjoint_full(f, algebra.one()), algebra.scalar(ExactScalar(1, -2)))


if __name__ == '__main__':
    unittest.main()
