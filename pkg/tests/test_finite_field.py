"""
Unit tests for finite field parameters and exact element arithmetic.
"""

import unittest
import sys
import os
import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from quantum_network_code.errors import DivisionByZero, FieldMismatch, InvalidField
from quantum_network_code.finite_field import FieldElement, FieldSpec, ff_arith, ff_trace, mul_matrix_rep


class TestFieldSpec(unittest.TestCase):
    """Test field construction and validation."""

    def test_prime_field_defaults(self):
        """Test that a prime field gets degree 1 and modulus x."""
        spec = FieldSpec(5)
        self.assertEqual(spec.q, 5)
        self.assertEqual(spec.degree, 1)
        self.assertEqual(spec.modulus, (0, 1))
        self.assertEqual(str(spec), "GF(5)")

    def test_extension_field_default_modulus(self):
        """Test GF(4) uses x^2 + x + 1."""
        spec = FieldSpec(2, 2)
        self.assertEqual(spec.q, 4)
        self.assertEqual(spec.modulus, (1, 1, 1))
        self.assertEqual(str(spec), "GF(2^2)")

    def test_equal_specs_hash_equal(self):
        """Test that an explicit default modulus gives the same field."""
        self.assertEqual(FieldSpec(2, 2), FieldSpec(2, 2, (1, 1, 1)))
        self.assertEqual(hash(FieldSpec(3, 2)), hash(FieldSpec(3, 2)))

    def test_non_prime_characteristic_rejected(self):
        """Test that composite or tiny characteristics raise InvalidField."""
        for p in (0, 1, 4, 6, 9):
            with self.assertRaises(InvalidField):
                FieldSpec(p)

    def test_reducible_modulus_rejected(self):
        """Test that x^2 + 1 = (x + 1)^2 over F_2 is rejected."""
        with self.assertRaises(InvalidField):
            FieldSpec(2, 2, (1, 0, 1))

    def test_non_monic_modulus_rejected(self):
        """Test that a modulus with leading coefficient 0 is rejected."""
        with self.assertRaises(InvalidField):
            FieldSpec(2, 2, (1, 1, 0))

    def test_wrong_modulus_length_rejected(self):
        """Test that the modulus length must be degree + 1."""
        with self.assertRaises(InvalidField):
            FieldSpec(3, 2, (1, 1))

    def test_zero_degree_rejected(self):
        """Test that degree 0 is rejected."""
        with self.assertRaises(InvalidField):
            FieldSpec(3, 0)

    def test_dict_round_trip(self):
        """Test to_dict / from_dict preserve the field."""
        for spec in (FieldSpec(2), FieldSpec(3), FieldSpec(2, 2), FieldSpec(3, 2)):
            self.assertEqual(FieldSpec.from_dict(spec.to_dict()), spec)

    def test_array_range_check(self):
        """Test that array() refuses integers outside [0, q)."""
        spec = FieldSpec(2, 2)
        arr = spec.array([0, 1, 2, 3])
        self.assertEqual(spec.to_ints(arr).tolist(), [0, 1, 2, 3])
        with self.assertRaises(InvalidField):
            spec.array([0, 4])
        with self.assertRaises(InvalidField):
            spec.array([-1])

    def test_coefficient_packing(self):
        """Test little-endian base-p packing of extension elements."""
        spec = FieldSpec(3, 2)
        self.assertEqual(spec.coeffs(7).tolist(), [1, 2])
        self.assertEqual(spec.from_coeffs([1, 2]), 7)
        for value in range(spec.q):
            self.assertEqual(spec.from_coeffs(spec.coeffs(value)), value)

    def test_omega_is_primitive_root(self):
        """Test omega^p = 1 and omega != 1."""
        for p in (2, 3, 5):
            w = FieldSpec(p).omega
            self.assertAlmostEqual(abs(w ** p - 1), 0.0, places=12)
            self.assertGreater(abs(w - 1), 1e-6)


class TestFieldArithmetic(unittest.TestCase):
    """Test element arithmetic through ff_arith."""

    def setUp(self):
        """Set up GF(4) with x = 2 and x + 1 = 3."""
        self.spec = FieldSpec(2, 2)
        self.x = FieldElement(self.spec, 2)
        self.x1 = FieldElement(self.spec, 3)

    def test_gf4_multiplication(self):
        """Test x * x = x + 1 and x * (x + 1) = 1."""
        self.assertEqual(int(self.x * self.x), 3)
        self.assertEqual(int(self.x * self.x1), 1)

    def test_gf4_addition_is_xor(self):
        """Test addition of packed GF(4) elements is bitwise xor."""
        for a in range(4):
            for b in range(4):
                total = FieldElement(self.spec, a) + FieldElement(self.spec, b)
                self.assertEqual(int(total), a ^ b)

    def test_prime_field_arithmetic(self):
        """Test sub, neg and inv in GF(7)."""
        spec = FieldSpec(7)
        a, b = FieldElement(spec, 3), FieldElement(spec, 5)
        self.assertEqual(int(a - b), 5)
        self.assertEqual(int(-a), 4)
        self.assertEqual(int(a.inverse()), 5)
        self.assertEqual(int(ff_arith(a, b, "mul")), 1)

    def test_every_nonzero_element_invertible(self):
        """Test z * z^-1 = 1 for every nonzero element of GF(9)."""
        spec = FieldSpec(3, 2)
        for value in range(1, spec.q):
            z = FieldElement(spec, value)
            self.assertEqual(int(z * z.inverse()), 1)

    def test_zero_inverse_raises(self):
        """Test that inverting zero raises DivisionByZero."""
        with self.assertRaises(DivisionByZero):
            FieldElement(self.spec, 0).inverse()
        with self.assertRaises(ZeroDivisionError):
            ff_arith(FieldElement(FieldSpec(5), 0), None, "inv")

    def test_mismatched_fields_raise(self):
        """Test that mixing GF(2) and GF(3) raises FieldMismatch."""
        with self.assertRaises(FieldMismatch):
            FieldElement(FieldSpec(2), 1) + FieldElement(FieldSpec(3), 1)

    def test_missing_operand_raises(self):
        """Test that binary kinds need a second operand."""
        with self.assertRaises(FieldMismatch):
            ff_arith(self.x, None, "add")

    def test_out_of_range_element(self):
        """Test that FieldElement rejects values >= q."""
        with self.assertRaises(InvalidField):
            FieldElement(self.spec, 4)


class TestTrace(unittest.TestCase):
    """Test the field trace and multiplication matrices."""

    def test_gf4_multiplication_matrix(self):
        """Test the matrix of multiplication by x in the basis {1, x}."""
        spec = FieldSpec(2, 2)
        M = mul_matrix_rep(FieldElement(spec, 2))
        self.assertEqual(M.tolist(), [[0, 1], [1, 1]])

    def test_multiplication_matrix_acts_on_coefficients(self):
        """Test M(z) coeffs(y) = coeffs(z y) mod p over GF(9)."""
        spec = FieldSpec(3, 2)
        for z in range(spec.q):
            M = mul_matrix_rep(FieldElement(spec, z))
            for y in range(spec.q):
                product = FieldElement(spec, z) * FieldElement(spec, y)
                np.testing.assert_array_equal((M @ spec.coeffs(y)) % 3, spec.coeffs(int(product)))

    def test_gf4_trace_values(self):
        """Test tr(0) = tr(1) = 0 and tr(x) = tr(x + 1) = 1 in GF(4)."""
        spec = FieldSpec(2, 2)
        self.assertEqual([ff_trace(FieldElement(spec, v)) for v in range(4)], [0, 0, 1, 1])
        self.assertEqual(spec.trace_table().tolist(), [0, 0, 1, 1])

    def test_prime_field_trace_is_identity(self):
        """Test tr(z) = z when q = p."""
        spec = FieldSpec(5)
        self.assertEqual([ff_trace(FieldElement(spec, v)) for v in range(5)], [0, 1, 2, 3, 4])

    def test_trace_is_additive(self):
        """Test tr(a + b) = tr(a) + tr(b) mod p over GF(9)."""
        spec = FieldSpec(3, 2)
        for a in range(spec.q):
            for b in range(spec.q):
                ea, eb = FieldElement(spec, a), FieldElement(spec, b)
                self.assertEqual(ff_trace(ea + eb), (ff_trace(ea) + ff_trace(eb)) % 3)

    def test_trace_is_onto(self):
        """Test every element of F_p appears as a trace."""
        for spec in (FieldSpec(2, 2), FieldSpec(3, 2), FieldSpec(2, 3)):
            self.assertEqual(set(spec.trace_table().tolist()), set(range(spec.p)))

    def test_trace_form_is_nondegenerate(self):
        """Test every a != 0 has some b with tr(a b) != 0."""
        for spec in (FieldSpec(2, 2), FieldSpec(3, 2), FieldSpec(2, 3), FieldSpec(5)):
            for a in range(1, spec.q):
                ea = FieldElement(spec, a)
                traces = [ff_trace(ea * FieldElement(spec, b)) for b in range(spec.q)]
                self.assertTrue(any(traces), f"{spec}: a={a}")

    def test_multiplication_matrix_is_a_homomorphism(self):
        """Test M(z w) = M(z) M(w) mod p over GF(4), GF(8) and GF(9)."""
        for spec in (FieldSpec(2, 2), FieldSpec(2, 3), FieldSpec(3, 2)):
            for z in range(spec.q):
                for w in range(spec.q):
                    ez, ew = FieldElement(spec, z), FieldElement(spec, w)
                    expected = (mul_matrix_rep(ez) @ mul_matrix_rep(ew)) % spec.p
                    np.testing.assert_array_equal(mul_matrix_rep(ez * ew), expected)


class TestFieldAxioms(unittest.TestCase):
    """Test the field axioms on sampled triples of small fields."""

    def test_axioms(self):
        """Test associativity, commutativity, distributivity, identities and inverses."""
        rng = np.random.default_rng(0)
        for spec in (FieldSpec(2, 2), FieldSpec(2, 3), FieldSpec(3, 2), FieldSpec(5), FieldSpec(7)):
            zero, one = FieldElement(spec, 0), FieldElement(spec, 1)
            for _ in range(200):
                a, b, c = (FieldElement(spec, int(v)) for v in rng.integers(0, spec.q, size=3))
                self.assertEqual((a + b) + c, a + (b + c))
                self.assertEqual((a * b) * c, a * (b * c))
                self.assertEqual(a + b, b + a)
                self.assertEqual(a * b, b * a)
                self.assertEqual(a * (b + c), a * b + a * c)
                self.assertEqual(a + zero, a)
                self.assertEqual(a * one, a)
                self.assertEqual(a + (-a), zero)
                self.assertEqual(a - b, a + (-b))
                if a.value:
                    self.assertEqual(a * a.inverse(), one)


if __name__ == '__main__':
    unittest.main()
