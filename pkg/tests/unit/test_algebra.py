"""Unit tests for the ternary Grassmann algebra."""

import unittest
from fractions import Fraction
from itertools import combinations_with_replacement, product

from hypothesis import given, settings
from hypothesis import strategies as st

from src.lib import algebra
from src.lib.algebra import TernaryElement
from src.lib.multi_index import EMPTY, MultiIndex, basis_indices
from src.lib.scalars import EXACT, FLOAT, ExactScalar
from src.utils.error_handlers import NotInvertible

OMEGA = ExactScalar.omega_power(1)
OMEGA2 = ExactScalar.omega_power(2)

coefficients = st.builds(ExactScalar, st.integers(-3, 3), st.integers(-3, 3))
indices = st.lists(st.integers(0, 2), min_size=1, max_size=4).map(lambda xs: MultiIndex.from_exponents(tuple(xs)))
elements = st.lists(st.tuples(indices, coefficients), max_size=4).map(lambda terms: TernaryElement(terms, EXACT))
wide_indices = st.lists(st.integers(0, 2), min_size=1, max_size=5).map(lambda xs: MultiIndex.from_exponents(tuple(xs)))
wide_elements = st.lists(st.tuples(wide_indices, coefficients), max_size=4).map(lambda terms: TernaryElement(terms, EXACT))
small_elements = st.lists(
    st.tuples(indices, st.builds(ExactScalar, st.integers(-1, 1), st.integers(-1, 1))), max_size=4
).map(lambda terms: TernaryElement(terms, EXACT))
vectors = st.lists(coefficients, min_size=1, max_size=5).map(
    lambda cs: TernaryElement(((MultiIndex.generator(j), c) for j, c in enumerate(cs, start=1)), EXACT)
)


def e(j):
    return algebra.generator(j)


def mono(*entries, coefficient=1):
    return algebra.monomial(MultiIndex(entries), coefficient)


class TestProduct(unittest.TestCase):
    """Test cases for mul and the generator relations."""

    def test_generator_relation(self):
        for i, j in combinations_with_replacement(range(1, 7), 2):
            if i < j:
                self.assertEqual(e(j) * e(i), algebra.scale(OMEGA2, e(i) * e(j)))

    def test_generator_cube_vanishes(self):
        for i in range(1, 7):
            self.assertTrue((e(i) * e(i) * e(i)).is_zero)
            self.assertFalse((e(i) * e(i)).is_zero)

    def test_product_text(self):
        self.assertEqual(str(e(2) * e(1)), "(w^2)*e[1]*e[2]")

    def test_ternary_form_vanishes(self):
        for i, j, k in combinations_with_replacement(range(1, 7), 3):
            self.assertTrue(algebra.ternary_form(i, j, k).is_zero, f"T(e{i}, e{j}, e{k})")

    def test_ternary_form_rejects_unsorted_indices(self):
        with self.assertRaises(ValueError):
            algebra.ternary_form(2, 1, 3)

    @settings(max_examples=150, deadline=None)
    @given(wide_elements, wide_elements, wide_elements)
    def test_associativity(self, a, b, c):
        self.assertEqual((a * b) * c, a * (b * c))

    @settings(max_examples=100, deadline=None)
    @given(elements, elements, elements)
    def test_distributivity(self, a, b, c):
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual((a + b) * c, a * c + b * c)

    @settings(max_examples=150, deadline=None)
    @given(vectors)
    def test_vector_cube_vanishes(self, z):
        self.assertTrue(algebra.cube_of_vector(z).is_zero)

    def test_cube_of_vector_rejects_other_grades(self):
        with self.assertRaises(ValueError):
            algebra.cube_of_vector(algebra.one() + e(1))

    @settings(max_examples=100, deadline=None)
    @given(indices, indices)
    def test_swap_is_a_phase(self, nu, mu):
        forward = algebra.monomial(nu) * algebra.monomial(mu)
        backward = algebra.monomial(mu) * algebra.monomial(nu)
        self.assertEqual(forward.is_zero, backward.is_zero)
        if not forward.is_zero:
            self.assertTrue(any(backward == algebra.scale(ExactScalar.omega_power(k), forward) for k in range(3)))

    def test_float_product_matches_exact(self):
        z = e(1) + algebra.scale(ExactScalar(1, 2), e(2) * e(3))
        w = algebra.scale(OMEGA, e(2)) + algebra.scalar(3)
        self.assertTrue(algebra.mul(z.to_float(), w.to_float()).isclose(algebra.mul(z, w)))

    def test_float_to_exact(self):
        z = TernaryElement({MultiIndex.generator(1): 0.5 + 0.25j, EMPTY: 3.0}, FLOAT)
        quarter = ExactScalar(Fraction(1, 2), Fraction(1, 4))
        expected = TernaryElement({MultiIndex.generator(1): quarter, EMPTY: 3})
        self.assertEqual(z.to_exact(), expected)
        self.assertEqual(expected.to_exact().field, EXACT)

    def test_mixed_fields_promote_to_float(self):
        self.assertEqual(algebra.mul(e(1), algebra.generator(2, FLOAT)).field, FLOAT)

    def test_power(self):
        self.assertEqual(algebra.power(e(1), 2), mono((1, 2)))
        self.assertTrue(algebra.power(e(1), 3).is_zero)
        self.assertEqual(algebra.power(e(1), 0), algebra.one())


class TestGrading(unittest.TestCase):
    """Test cases for blades and Z3 components."""

    def setUp(self):
        self.z = algebra.scalar(2) + e(1) + mono((1, 1), (2, 1)) + mono((1, 2), (2, 1)) + mono((1, 2), (2, 2))

    def test_grade_project(self):
        self.assertEqual(algebra.grade_project(self.z, 2), mono((1, 1), (2, 1)))
        self.assertTrue(algebra.grade_project(self.z, 5).is_zero)
        with self.assertRaises(ValueError):
            algebra.grade_project(self.z, -1)

    def test_blades_reassemble(self):
        blades = algebra.blades(self.z)
        self.assertEqual(sorted(blades), [0, 1, 2, 3, 4])
        total = algebra.zero()
        for blade in blades.values():
            total = total + blade
        self.assertEqual(total, self.z)

    def test_z3_components(self):
        self.assertEqual(algebra.z3_component(self.z, 0), algebra.scalar(2) + mono((1, 2), (2, 1)))
        self.assertEqual(algebra.z3_component(self.z, 1), e(1) + mono((1, 2), (2, 2)))
        with self.assertRaises(ValueError):
            algebra.z3_component(self.z, 3)

    @settings(max_examples=100, deadline=None)
    @given(elements, elements)
    def test_zero_component_is_a_subalgebra(self, a, b):
        a0, b0 = algebra.z3_component(a, 0), algebra.z3_component(b, 0)
        product_ = a0 * b0
        self.assertEqual(algebra.z3_component(product_, 0), product_)

    @settings(max_examples=100, deadline=None)
    @given(elements, elements, st.integers(0, 2), st.integers(0, 2))
    def test_z3_components_add_mod_3(self, a, b, k, s):
        product_ = algebra.z3_component(a, k) * algebra.z3_component(b, s)
        self.assertEqual(algebra.z3_component(product_, (k + s) % 3), product_)

    def test_odd_components_multiply_across(self):
        # G1 * G2 lands in G0, G2 * G2 in G1
        g1_g2 = e(1) * mono((2, 1), (3, 1))
        self.assertFalse(g1_g2.is_zero)
        self.assertEqual(algebra.z3_component(g1_g2, 0), g1_g2)
        self.assertTrue(algebra.z3_component(g1_g2, 1).is_zero)
        g2_g2 = mono((1, 2)) * mono((2, 1), (3, 1))
        self.assertFalse(g2_g2.is_zero)
        self.assertEqual(algebra.z3_component(g2_g2, 1), g2_g2)
        self.assertTrue(algebra.z3_component(g2_g2, 2).is_zero)

    @settings(max_examples=100, deadline=None)
    @given(elements, elements, st.integers(0, 8), st.integers(0, 8))
    def test_grades_add_on_homogeneous_products(self, a, b, k, s):
        product_ = algebra.grade_project(a, k) * algebra.grade_project(b, s)
        self.assertEqual(algebra.grade_project(product_, k + s), product_)


class TestConjugation(unittest.TestCase):
    """Test cases for the pseudo-conjugation."""

    def test_generators(self):
        self.assertEqual(algebra.conj(e(1)), mono((1, 2)))
        self.assertTrue(algebra.conj(mono((1, 2))).is_zero)
        self.assertEqual(algebra.conj(mono((1, 1), (2, 1))), mono((1, 2), (2, 2), coefficient=OMEGA2))

    def test_conjugates_coefficients(self):
        z = algebra.scalar(ExactScalar(1, 2))
        self.assertEqual(algebra.conj(z), algebra.scalar(ExactScalar(1, -2)))

    @settings(max_examples=150, deadline=None)
    @given(elements)
    def test_double_conjugate_is_the_body(self, z):
        z0 = algebra.body(z)
        twice = algebra.conj(algebra.conj(z))
        self.assertTrue(twice.is_scalar)
        self.assertEqual(twice, algebra.scalar(z0))

    @settings(max_examples=150, deadline=None)
    @given(elements)
    def test_body_of_norm_square(self, z):
        z0 = algebra.body(z)
        modulus = z0 * z0.conjugate()
        self.assertEqual(algebra.body(z * algebra.conj(z)), modulus)
        self.assertEqual(algebra.body(algebra.conj(z) * z), modulus)

    def test_anti_multiplicative_on_monomials(self):
        for nu, mu in product(basis_indices(2), repeat=2):
            a, b = algebra.monomial(nu), algebra.monomial(mu)
            self.assertTrue(algebra.anti_multiplicative_conj_check(a, b), f"{nu}, {mu}")


class TestInverse(unittest.TestCase):
    """Test cases for nilpotency and inversion."""

    def test_neumann_example(self):
        self.assertEqual(algebra.inverse(algebra.one() + e(1)), algebra.one() - e(1) + mono((1, 2)))

    def test_nilpotency_index(self):
        self.assertEqual(algebra.nilpotency_index(algebra.scalar(5)), 1)
        self.assertEqual(algebra.nilpotency_index(e(1)), 3)
        self.assertEqual(algebra.nilpotency_index(e(1) + e(2)), 3)
        self.assertEqual(algebra.nilpotency_index(mono((1, 2))), 2)

    @settings(max_examples=150, deadline=None)
    @given(elements, coefficients.filter(lambda c: not c.is_zero))
    def test_exact_inverse(self, z, z0):
        z = algebra.scalar(z0) + algebra.soul(z)
        inverse = algebra.inverse(z)
        self.assertEqual(z * inverse, algebra.one())
        self.assertEqual(inverse * z, algebra.one())

    @settings(max_examples=100, deadline=None)
    @given(small_elements, coefficients.filter(lambda c: abs(c) >= 0.5))
    def test_float_inverse(self, z, z0):
        z = (algebra.scalar(z0) + algebra.soul(z)).to_float()
        inverse = algebra.inverse(z)
        self.assertTrue((z * inverse).isclose(algebra.one(FLOAT), 1e-10))
        self.assertTrue((inverse * z).isclose(algebra.one(FLOAT), 1e-10))

    @settings(max_examples=50, deadline=None)
    @given(elements)
    def test_zero_body_is_not_invertible(self, z):
        with self.assertRaises(NotInvertible):
            algebra.inverse(algebra.soul(z))

    def test_float_floor(self):
        z = algebra.scalar(1e-13, FLOAT) + algebra.generator(1, FLOAT)
        self.assertFalse(algebra.is_invertible(z))
        with self.assertRaises(NotInvertible):
            algebra.inverse(z)

    def test_negative_power_inverts(self):
        z = algebra.scalar(2) + e(1)
        self.assertEqual(algebra.power(z, -1) * z, algebra.one())


class TestProjections(unittest.TestCase):
    """Test cases for P_n, I_n and the last-generator decomposition."""

    def setUp(self):
        self.z = algebra.scalar(3) + e(1) + mono((1, 1), (2, 1)) + mono((2, 2)) + mono((1, 2), (3, 1))

    def test_project_pn(self):
        self.assertEqual(algebra.project_pn(self.z, 0, 3), self.z)
        self.assertEqual(algebra.project_pn(self.z, 1, 3), algebra.scalar(3) + e(1) + mono((1, 1), (2, 1)) + mono((2, 2)))
        self.assertEqual(algebra.project_pn(self.z, 3, 3), algebra.scalar(3))
        with self.assertRaises(ValueError):
            algebra.project_pn(self.z, 4, 3)
        with self.assertRaises(ValueError):
            algebra.project_pn(self.z, 1, 2)

    def test_identity_projector(self):
        projector = algebra.identity_projector(2, 3)
        self.assertEqual(projector, mono((2, 2), (3, 2)))
        self.assertTrue((projector * projector).is_zero)
        for n in (1, 2, 3):
            i_n = algebra.identity_projector(n, 3)
            self.assertEqual(self.z * i_n, algebra.project_pn(self.z, n, 3) * i_n)

    def test_decompose_last(self):
        a, b, c = algebra.decompose_last(self.z, 3)
        self.assertEqual(c, algebra.zero())
        self.assertEqual(b, mono((1, 2)))
        e3 = e(3)
        self.assertEqual(a + b * e3 + c * e3 * e3, self.z)
        with self.assertRaises(ValueError):
            algebra.decompose_last(self.z, 2)

    @settings(max_examples=100, deadline=None)
    @given(elements)
    def test_part_without_body_in_last_generator_cubes_to_zero(self, z):
        a, b, c = algebra.decompose_last(z, 4)
        tail = b * e(4) + c * e(4) * e(4)
        self.assertEqual(a + tail, z)
        self.assertTrue((tail * tail * tail).is_zero)

    @settings(max_examples=100, deadline=None)
    @given(elements)
    def test_commute_generator(self, z):
        a = algebra.project_pn(z, 1, 4)
        self.assertEqual(a * e(4), e(4) * algebra.commute_generator(a, 4))

    def test_body_and_soul(self):
        self.assertEqual(algebra.body(self.z), ExactScalar(3))
        self.assertEqual(algebra.soul(self.z) + algebra.scalar(3), self.z)

    def test_l2_inner(self):
        z = e(1) + algebra.scale(ExactScalar(0, 1), e(2))
        self.assertEqual(algebra.l2_inner(z, e(1)), 1)
        self.assertEqual(algebra.l2_inner(z, z), 2)
        self.assertEqual(algebra.l2_inner_exact(z, algebra.scale(ExactScalar(0, 1), e(2))), ExactScalar(1))


if __name__ == '__main__':
    unittest.main()
