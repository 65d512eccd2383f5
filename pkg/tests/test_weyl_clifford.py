"""
Unit tests for Weyl operators and metaplectic (Clifford) synthesis.
"""

import unittest
import sys
import os
import numpy as np
from unittest.mock import patch

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from quantum_network_code import fq_linalg as la
from quantum_network_code.constructions import random_clifford_network
from quantum_network_code.errors import NotSymplectic, ResourceLimit, SynthesisFailed
from quantum_network_code.finite_field import FieldSpec
from quantum_network_code.symplectic import SymplecticContext, fp_pairing
from quantum_network_code.weyl_clifford import (CERTIFICATE_SAMPLE_SIZE, WeylLabel, basis_linear_unitary, equal_up_to_phase,
                                                fourier_state, is_unitary, metaplectic, weyl, weyl_space)

FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(2, 2)]


def random_symplectic(spec, n, seed):
    net = random_clifford_network(n, 0, spec, np.random.default_rng(seed))
    return net.layers[0].matrix


def conjugation_deviation(U, g, space, a):
    """max |U W(a) U^dagger - c W(g a)| and |c| for the best phase c."""
    GF = space.spec.GF
    lhs = U @ space.operator(a) @ U.conj().T
    rhs = space.operator(g @ GF(a))
    c = np.vdot(rhs, lhs) / space.dim
    return float(np.max(np.abs(lhs - c * rhs))), abs(c)


class TestWeylOperators(unittest.TestCase):
    """Test W(s, t) = X(s) Z(t)."""

    def test_identity_label(self):
        """Test W(0, 0) = I."""
        for spec in FIELDS:
            W = weyl(WeylLabel(spec, (0, 0), (0, 0)))
            np.testing.assert_allclose(W, np.eye(spec.q ** 2))

    def test_operators_are_unitary(self):
        """Test every W on one register is unitary."""
        for spec in FIELDS:
            space = weyl_space(spec, 1)
            for a in space.all_labels():
                self.assertTrue(is_unitary(space.operator(a)))

    def test_commutation_phase(self):
        """Test W(a) W(b) = omega^<a, b> W(b) W(a) for every pair of labels."""
        for spec, n in [(FieldSpec(2), 1), (FieldSpec(3), 1), (FieldSpec(2, 2), 1), (FieldSpec(2), 2), (FieldSpec(3), 2)]:
            space = weyl_space(spec, n)
            ctx = SymplecticContext(n, spec)
            labels = list(space.all_labels())
            ops = [space.operator(a) for a in labels]
            for i, a in enumerate(labels):
                for j, b in enumerate(labels):
                    phase = spec.omega ** fp_pairing(spec.GF(a), spec.GF(b), ctx)
                    np.testing.assert_allclose(ops[i] @ ops[j], phase * ops[j] @ ops[i], atol=1e-12)

    def test_commutation_phase_gf4_two_registers(self):
        """Test the commutation phase on every pair of labels of GF(4)^2."""
        spec = FieldSpec(2, 2)
        space = weyl_space(spec, 2)
        ctx = SymplecticContext(2, spec)
        labels = np.array(list(space.all_labels()))
        self.assertEqual(len(labels), 256)
        ops = np.array([space.operator(a) for a in labels])
        L = spec.GF(labels)
        exponents = spec.trace_table()[(L @ ctx.J @ L.T).view(np.ndarray).astype(np.int64)]
        self.assertEqual(fp_pairing(L[5], L[77], ctx), exponents[5, 77])
        for i in range(len(labels)):
            phases = spec.omega ** exponents[i]
            np.testing.assert_allclose(ops[i] @ ops, phases[:, None, None] * (ops @ ops[i]), atol=1e-12)

    def test_x_shifts_computational_basis(self):
        """Test X(s)|x> = |x + s> over GF(4)."""
        spec = FieldSpec(2, 2)
        for s in range(4):
            X = weyl(WeylLabel(spec, (s,), (0,)))
            for x in range(4):
                self.assertAlmostEqual(abs(X[x ^ s, x]), 1.0)

    def test_fourier_states_are_x_eigenvectors(self):
        """Test X(s)|y>_F = omega^-tr(s y) |y>_F."""
        for spec in FIELDS:
            trprod = spec.trace_product_table()
            for s in range(spec.q):
                X = weyl(WeylLabel(spec, (s,), (0,)))
                for y in range(spec.q):
                    v = fourier_state([y], spec)
                    np.testing.assert_allclose(X @ v, spec.omega ** (-trprod[s, y]) * v, atol=1e-12)

    def test_z_shifts_fourier_basis(self):
        """Test Z(t)|y>_F = |y + t>_F."""
        for spec in FIELDS:
            add = spec.add_table()
            for t in range(spec.q):
                Z = weyl(WeylLabel(spec, (0,), (t,)))
                for y in range(spec.q):
                    np.testing.assert_allclose(Z @ fourier_state([y], spec), fourier_state([add[y, t]], spec), atol=1e-12)

    def test_label_round_trip(self):
        """Test WeylLabel.from_vector(label.vector()) == label."""
        spec = FieldSpec(3)
        label = WeylLabel(spec, (1, 2), (0, 1))
        self.assertEqual(WeylLabel.from_vector(spec, label.vector()), label)
        self.assertEqual(label.n, 2)
        self.assertEqual(len({label, WeylLabel(spec, (1, 2), (0, 1))}), 1)


class TestMetaplectic(unittest.TestCase):
    """Test U(g) W(a) U(g)^dagger = c W(g a)."""

    def test_random_symplectic_exhaustive(self):
        """Test the intertwining relation on every label for small spaces."""
        for spec in FIELDS:
            for n in (1, 2):
                g = random_symplectic(spec, n, seed=10 * spec.q + n)
                ctx = SymplecticContext(n, spec)
                U, cert = metaplectic(g, ctx)
                self.assertTrue(is_unitary(U))
                self.assertTrue(cert.exhaustive)
                self.assertEqual(cert.labels_checked, spec.q ** (2 * n))
                self.assertLessEqual(cert.max_deviation, 1e-9)

                space = weyl_space(spec, n)
                for a in space.all_labels():
                    dev, mag = conjugation_deviation(U, g, space, a)
                    self.assertLess(dev, 1e-8)
                    self.assertAlmostEqual(mag, 1.0, places=8)

    def test_three_registers_gf3(self):
        """Test synthesis on 27 dimensions, still checked exhaustively."""
        spec = FieldSpec(3)
        g = random_symplectic(spec, 3, seed=5)
        U, cert = metaplectic(g, SymplecticContext(3, spec))
        self.assertTrue(cert.exhaustive)
        self.assertEqual(cert.labels_checked, 729)
        self.assertLessEqual(cert.max_deviation, 1e-9)

    def test_large_space_checks_seeded_sample(self):
        """Test 125 dimensions: generators plus a fixed sample of labels, not exhaustive."""
        spec = FieldSpec(5)
        ctx = SymplecticContext(3, spec)
        g = random_symplectic(spec, 3, seed=6)
        U, cert = metaplectic(g, ctx)
        self.assertFalse(cert.exhaustive)
        self.assertEqual(cert.labels_checked, 6 + CERTIFICATE_SAMPLE_SIZE)
        self.assertLessEqual(cert.max_deviation, 1e-9)
        _, again = metaplectic(g, ctx)
        self.assertEqual(again.max_deviation, cert.max_deviation)

    def test_sample_deviation_fails_synthesis(self):
        """Test a violation found only on the sampled labels raises SynthesisFailed."""
        spec = FieldSpec(5)
        g = random_symplectic(spec, 3, seed=6)
        results = [(0.0, [1.0] * 6), (1.0, [])]
        with patch('quantum_network_code.weyl_clifford.mn1_deviation', side_effect=results) as deviation:
            with self.assertRaises(SynthesisFailed):
                metaplectic(g, SymplecticContext(3, spec))
        self.assertEqual(len(deviation.call_args_list[1][0][3]), CERTIFICATE_SAMPLE_SIZE)

    def test_products_compose_up_to_phase(self):
        """Test U(g1 g2) equals U(g1) U(g2) up to a global phase."""
        for spec in FIELDS:
            ctx = SymplecticContext(2, spec)
            for seed in range(3):
                g1 = random_symplectic(spec, 2, seed=100 + seed)
                g2 = random_symplectic(spec, 2, seed=200 + seed)
                U1, _ = metaplectic(g1, ctx)
                U2, _ = metaplectic(g2, ctx)
                U12, _ = metaplectic(g1 @ g2, ctx)
                self.assertLess(equal_up_to_phase(U12, U1 @ U2), 1e-8)

    def test_fourier_matrix(self):
        """Test the symplectic swap (s, t) -> (-t, s) gives the Fourier transform."""
        for spec in FIELDS + [FieldSpec(5)]:
            g = spec.GF([[0, spec.p - 1], [1, 0]])
            U, _ = metaplectic(g, SymplecticContext(1, spec))
            F = weyl_space(spec, 1).fourier_matrix()
            self.assertLess(equal_up_to_phase(U, F), 1e-9)

    def test_nullspace_matches_stabilizer(self):
        """Test both synthesis paths agree up to a global phase."""
        for spec, n in [(FieldSpec(2), 2), (FieldSpec(3), 1), (FieldSpec(3), 2), (FieldSpec(2, 2), 1)]:
            g = random_symplectic(spec, n, seed=20 + spec.q + n)
            ctx = SymplecticContext(n, spec)
            U1, _ = metaplectic(g, ctx, "stabilizer")
            U2, cert = metaplectic(g, ctx, "nullspace")
            self.assertEqual(cert.method, "nullspace")
            self.assertLess(equal_up_to_phase(U1, U2), 1e-8)

    def test_basis_linear_lift(self):
        """Test |x> -> |gbar x> equals U(diag(gbar, gbar^-T)) up to phase."""
        spec = FieldSpec(3)
        gbar = spec.GF([[1, 2], [1, 0]])
        lift = la.block_diag(gbar, la.inverse(gbar).T)
        U_perm = basis_linear_unitary(gbar, spec)
        U_meta, _ = metaplectic(lift, SymplecticContext(2, spec))
        self.assertLess(equal_up_to_phase(U_perm, U_meta), 1e-9)

    def test_basis_linear_unitary_indexing(self):
        """Test register 1 is the slowest index: |0,1> -> |1,1>."""
        spec = FieldSpec(2)
        U = basis_linear_unitary(spec.GF([[1, 1], [0, 1]]), spec)
        self.assertEqual(U[3, 1], 1.0)
        self.assertEqual(U[0, 0], 1.0)
        self.assertEqual(U[2, 2], 1.0)
        self.assertEqual(U[1, 3], 1.0)

    def test_non_symplectic_rejected(self):
        """Test a non-symplectic matrix raises NotSymplectic."""
        spec = FieldSpec(3)
        g = spec.identity(2)
        g[0, 0] = 2
        with self.assertRaises(NotSymplectic):
            metaplectic(g, SymplecticContext(1, spec))

    def test_unknown_method_rejected(self):
        """Test an unknown synthesis method raises ValueError."""
        spec = FieldSpec(2)
        with self.assertRaises(ValueError):
            metaplectic(spec.identity(2), SymplecticContext(1, spec), "magic")

    def test_nullspace_size_limit(self):
        """Test null-space synthesis refuses dimension 27."""
        spec = FieldSpec(3)
        with self.assertRaises(ResourceLimit):
            metaplectic(spec.identity(6), SymplecticContext(3, spec), "nullspace")

    def test_equal_up_to_phase(self):
        """Test a global phase is ignored."""
        U = weyl_space(FieldSpec(3), 1).fourier_matrix()
        self.assertLess(equal_up_to_phase(U, np.exp(0.7j) * U), 1e-12)
        self.assertGreater(equal_up_to_phase(U, np.eye(3)), 0.1)


if __name__ == '__main__':
    unittest.main()
