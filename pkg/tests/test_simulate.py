"""
Unit tests for exact network simulation and entanglement fidelity.
"""

import unittest
from unittest.mock import Mock
from types import SimpleNamespace
import sys
import os
import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from quantum_network_code.capacity import p_mix, pauli_channel
from quantum_network_code.codeplan import decode, encode, plan_code
from quantum_network_code.constructions import (gen_lemma_l1, identity_network, random_clifford_network,
                                                random_unitary_network, valid_triples, worst_case_network, RankTriple)
from quantum_network_code.errors import DimensionError, InvalidChannel, InvalidState, NoCapacity, ResourceLimit
from quantum_network_code.finite_field import FieldSpec
from quantum_network_code.network import CorruptionModel
from quantum_network_code.simulate import (AdaptiveAdversary, KrausChannel, check_resources, choi_from_kraus,
                                           choi_matrix, choi_to_kraus, embed_operator, entanglement_fidelity,
                                           haar_unitary, network_channel, partial_trace, permute_subsystems,
                                           random_adversary, random_density, random_kraus, run_adaptive,
                                           run_adaptive_pure, run_individual, run_mix_substitution,
                                           validate_density, wire_permutation_unitary)
from quantum_network_code.weyl_clifford import weyl_space


def apply_from_choi(choi, rho, din, dout):
    """Lambda(rho) = Tr_in[(rho^T x I) C]."""
    C = choi.reshape(din, dout, din, dout)
    return np.einsum("ij,iajb->ab", rho, C)


class TestTensorHelpers(unittest.TestCase):
    """Test subsystem bookkeeping."""

    def setUp(self):
        """Set up a random generator."""
        self.rng = np.random.default_rng(0)

    def test_partial_trace_of_product(self):
        """Test Tr_B(A x B) = A Tr(B)."""
        A = random_density(2, self.rng)
        B = random_density(3, self.rng)
        np.testing.assert_allclose(partial_trace(np.kron(A, B), [2, 3], [0]), A, atol=1e-12)
        np.testing.assert_allclose(partial_trace(np.kron(A, B), [2, 3], [1]), B, atol=1e-12)

    def test_permute_subsystems_swaps_factors(self):
        """Test reordering (A x B) gives (B x A)."""
        A = random_density(2, self.rng)
        B = random_density(3, self.rng)
        np.testing.assert_allclose(permute_subsystems(np.kron(A, B), [2, 3], [1, 0]), np.kron(B, A), atol=1e-12)

    def test_embed_operator_middle_factor(self):
        """Test embedding on factor 1 of three is I x op x I."""
        op = haar_unitary(3, self.rng)
        full = embed_operator(op, [1], [2, 3, 2])
        np.testing.assert_allclose(full, np.kron(np.kron(np.eye(2), op), np.eye(2)), atol=1e-12)

    def test_embed_operator_reversed_targets(self):
        """Test targets [1, 0] apply op to the swapped pair."""
        A, B = haar_unitary(2, self.rng), haar_unitary(2, self.rng)
        np.testing.assert_allclose(embed_operator(np.kron(A, B), [1, 0], [2, 2]), np.kron(B, A), atol=1e-12)

    def test_wire_permutation_is_swap(self):
        """Test exchanging two qubits gives SWAP."""
        swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        np.testing.assert_allclose(wire_permutation_unitary([1, 0], 2), swap)

    def test_validate_density(self):
        """Test shape, trace and positivity checks."""
        with self.assertRaises(DimensionError):
            validate_density(np.eye(2) / 2, dim=3)
        with self.assertRaises(InvalidState):
            validate_density(np.eye(2))
        with self.assertRaises(InvalidState):
            validate_density(np.diag([1.5, -0.5]))
        with self.assertRaises(InvalidState):
            validate_density(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_resource_limit(self):
        """Test simulation beyond 4096 dimensions is refused."""
        check_resources(2, 12)
        with self.assertRaises(ResourceLimit):
            check_resources(2, 13)
        with self.assertRaises(ResourceLimit):
            check_resources(2, 11, memory_dim=3)


class TestKrausChannel(unittest.TestCase):
    """Test channel construction and Choi conversions."""

    def test_non_trace_preserving_rejected(self):
        """Test a Kraus set not summing to I raises InvalidChannel."""
        with self.assertRaises(InvalidChannel):
            KrausChannel([np.eye(2) * 0.5])
        with self.assertRaises(InvalidChannel):
            KrausChannel([])

    def test_depolarizing(self):
        """Test full depolarization maps every state to I/d."""
        rho = random_density(3, np.random.default_rng(1))
        np.testing.assert_allclose(KrausChannel.depolarizing(3).apply(rho), np.eye(3) / 3, atol=1e-12)

    def test_choi_round_trip(self):
        """Test Choi -> Kraus -> Choi preserves the channel."""
        rng = np.random.default_rng(2)
        channel = random_kraus(2, 3, rng)
        choi = choi_from_kraus(channel)
        np.testing.assert_allclose(choi_matrix(channel.apply, 2), choi, atol=1e-12)
        again = choi_to_kraus(choi, 2, 2)
        rho = random_density(2, rng)
        np.testing.assert_allclose(again.apply(rho), channel.apply(rho), atol=1e-10)

    def test_then_and_tensor(self):
        """Test composition order and tensor products."""
        rng = np.random.default_rng(3)
        A, B = random_kraus(2, 2, rng), random_kraus(2, 2, rng)
        rho = random_density(2, rng)
        np.testing.assert_allclose(A.then(B).apply(rho), B.apply(A.apply(rho)), atol=1e-12)
        sigma = random_density(2, rng)
        np.testing.assert_allclose(A.tensor(B).apply(np.kron(rho, sigma)), np.kron(A.apply(rho), B.apply(sigma)),
                                   atol=1e-12)


class TestRunners(unittest.TestCase):
    """Test the individual, adaptive and mix-substitution runners."""

    def setUp(self):
        """Set up a random dense network over GF(2)."""
        self.rng = np.random.default_rng(5)
        self.spec = FieldSpec(2)
        self.net = random_unitary_network(2, 2, self.spec, self.rng)

    def test_identity_corruption(self):
        """Test identity channels reduce to the total unitary."""
        rho = random_density(4, self.rng)
        out = run_individual(self.net, [KrausChannel.identity(2)] * 2, rho)
        U = self.net.total_unitary()
        np.testing.assert_allclose(out, U @ rho @ U.conj().T, atol=1e-10)

    def test_individual_matches_choi_composition(self):
        """Test run_individual against the Choi matrix of the network channel."""
        gammas = [random_kraus(2, 2, self.rng) for _ in range(2)]
        choi = choi_from_kraus(network_channel(self.net, gammas))
        rho = random_density(4, self.rng)
        np.testing.assert_allclose(apply_from_choi(choi, rho, 4, 4), run_individual(self.net, gammas, rho), atol=1e-10)

    def test_trace_preserved_with_reference(self):
        """Test a reference system survives with unit trace."""
        gammas = [random_kraus(2, 3, self.rng) for _ in range(2)]
        rho = random_density(8, self.rng)
        out = run_individual(self.net, gammas, rho, reference_dim=2)
        self.assertAlmostEqual(np.trace(out).real, 1.0)
        np.testing.assert_allclose(partial_trace(out, [4, 2], [1]), partial_trace(rho, [4, 2], [1]), atol=1e-10)

    def test_wrong_channel_count(self):
        """Test m1 channels are required."""
        with self.assertRaises(DimensionError):
            run_individual(self.net, [KrausChannel.identity(2)], np.eye(4) / 4)

    def test_mix_substitution_matches_pauli_mixing(self):
        """Test replacing by I/q equals the uniform Weyl channel."""
        mix = pauli_channel(p_mix(self.spec, 1), self.spec, 1)
        rho = random_density(4, self.rng)
        np.testing.assert_allclose(run_mix_substitution(self.net, rho), run_individual(self.net, [mix, mix], rho),
                                   atol=1e-10)

    def test_adaptive_with_trivial_memory(self):
        """Test a one-dimensional memory reduces to individual unitary channels."""
        unitaries = [haar_unitary(2, self.rng) for _ in range(2)]
        adv = AdaptiveAdversary(1, np.eye(1), list(unitaries))
        rho = random_density(4, self.rng)
        expected = run_individual(self.net, [KrausChannel.from_unitary(U) for U in unitaries], rho)
        np.testing.assert_allclose(run_adaptive(self.net, adv, rho), expected, atol=1e-10)

    def test_adaptive_product_interaction(self):
        """Test U_i = V_i x I on the memory matches individual channels."""
        unitaries = [haar_unitary(2, self.rng) for _ in range(2)]
        memory = random_density(3, self.rng)
        adv = AdaptiveAdversary(3, memory, [np.kron(U, np.eye(3)) for U in unitaries])
        rho = random_density(4, self.rng)
        expected = run_individual(self.net, [KrausChannel.from_unitary(U) for U in unitaries], rho)
        np.testing.assert_allclose(run_adaptive(self.net, adv, rho), expected, atol=1e-10)

    def test_pure_runner_matches_density_runner(self):
        """Test the state-vector path against run_adaptive."""
        adv = random_adversary(2, 2, 2, self.rng, pure_memory=True)
        psi = np.zeros(4, dtype=complex)
        psi[1] = 1.0
        out = run_adaptive_pure(self.net, adv, psi)
        joint = np.outer(out, out.conj())
        reduced = partial_trace(joint, [4, 2], [0])
        np.testing.assert_allclose(reduced, run_adaptive(self.net, adv, np.outer(psi, psi.conj())), atol=1e-10)

    def test_pure_runner_needs_pure_memory(self):
        """Test a mixed memory is refused by the state-vector path."""
        adv = random_adversary(2, 2, 2, self.rng, pure_memory=False)
        with self.assertRaises(InvalidState):
            run_adaptive_pure(self.net, adv, np.array([1, 0, 0, 0], dtype=complex))


class TestEntanglementFidelity(unittest.TestCase):
    """Test the fidelity of planned codes against every corruption model."""

    def setUp(self):
        """Set up mock feedback and the worst-case GF(2) network."""
        self.feedback = Mock()
        self.feedback.pushConsoleInfo = Mock()
        self.feedback.isCanceled = Mock(return_value=False)
        self.spec = FieldSpec(2)
        self.net = worst_case_network(4, 2, self.spec)
        self.plan = plan_code(self.net)

    def test_no_corruption(self):
        """Test the uncorrupted network has fidelity 1."""
        fidelity = entanglement_fidelity(self.plan, self.net, CorruptionModel.none(), self.feedback)
        self.assertAlmostEqual(fidelity, 1.0, places=9)
        self.feedback.pushConsoleInfo.assert_called()

    def test_adaptive_pure_memory(self):
        """Test random adaptive adversaries with pure memory leave fidelity 1."""
        for seed in range(5):
            rng = np.random.default_rng(seed)
            adv = random_adversary(2, 2, 2, rng, pure_memory=True)
            fidelity = entanglement_fidelity(self.plan, self.net, CorruptionModel.adaptive(adv))
            self.assertGreaterEqual(fidelity, 1.0 - 1e-9)

    def test_adaptive_mixed_memory(self):
        """Test the density-matrix path with a mixed memory."""
        adv = random_adversary(2, 2, 2, np.random.default_rng(11), pure_memory=False)
        fidelity = entanglement_fidelity(self.plan, self.net, CorruptionModel.adaptive(adv))
        self.assertGreaterEqual(fidelity, 1.0 - 1e-9)

    def test_individual_channels(self):
        """Test random individual Kraus channels leave fidelity 1."""
        rng = np.random.default_rng(12)
        corruption = CorruptionModel.individual([random_kraus(2, 3, rng) for _ in range(2)])
        self.assertGreaterEqual(entanglement_fidelity(self.plan, self.net, corruption), 1.0 - 1e-9)

    def test_mix_substitution(self):
        """Test replacing the corrupted register by noise leaves fidelity 1."""
        fidelity = entanglement_fidelity(self.plan, self.net, CorruptionModel.mix_substitution())
        self.assertGreaterEqual(fidelity, 1.0 - 1e-9)

    def test_other_networks(self):
        """Test fidelity 1 for a rank-triple network over GF(3) and a Clifford network over GF(4)."""
        rng = np.random.default_rng(13)
        cases = [
            gen_lemma_l1(RankTriple(2, 1, 1, 3, 2), FieldSpec(3)),
            random_clifford_network(3, 1, FieldSpec(2, 2), rng),
        ]
        for net in cases:
            plan = plan_code(net)
            adv = random_adversary(net.spec.q, 2, net.m1, rng)
            fidelity = entanglement_fidelity(plan, net, CorruptionModel.adaptive(adv))
            self.assertGreaterEqual(fidelity, 1.0 - 1e-9)

    def test_uncoded_transmission_fails(self):
        """Test a depolarized wire without coding has fidelity 1/4."""
        spec = FieldSpec(2)
        net = identity_network(1, 1, spec)
        plan = SimpleNamespace(message_dim=2, junk_dim=1, rho0=np.eye(1), U_e=np.eye(2), U_d=np.eye(2))
        corruption = CorruptionModel.individual([KrausChannel.depolarizing(2)])
        fidelity = entanglement_fidelity(plan, net, corruption)
        self.assertAlmostEqual(fidelity, 0.25, places=9)

class TestRecoverySweeps(unittest.TestCase):
    """Test perfect recovery over many adversaries, generated networks and rho0 choices."""

    def setUp(self):
        """Set up the worst-case GF(2) network with m0 = 4, m1 = 2."""
        self.spec = FieldSpec(2)
        self.net = worst_case_network(4, 2, self.spec)
        self.plan = plan_code(self.net)

    def test_hundred_adaptive_adversaries(self):
        """Test 100 Haar-random adaptive adversaries with memory dimension 2 or 4."""
        self.assertAlmostEqual(self.plan.rate_bits, 1.0)
        for seed in range(100):
            rng = np.random.default_rng(1000 + seed)
            memory_dim = 2 if seed % 2 else 4
            adv = random_adversary(2, memory_dim, 2, rng, pure_memory=True)
            fidelity = entanglement_fidelity(self.plan, self.net, CorruptionModel.adaptive(adv))
            self.assertGreaterEqual(fidelity, 1.0 - 1e-9, f"seed {seed}")

    def test_every_generated_network(self):
        """Test 50 adversaries on each rank-triple network with q in {2, 3}."""
        cases = [(FieldSpec(2), m0, m1) for m0 in range(2, 5) for m1 in (1, 2)]
        cases += [(FieldSpec(3), m0, m1) for m0 in range(2, 4) for m1 in (1, 2)]
        checked = 0
        for spec, m0, m1 in cases:
            for triple in valid_triples(m0, m1):
                net = gen_lemma_l1(triple, spec)
                try:
                    plan = plan_code(net)
                except NoCapacity:
                    self.assertGreaterEqual(triple.m_star_star, m0)
                    continue
                rng = np.random.default_rng(checked)
                for k in range(50):
                    adv = random_adversary(spec.q, spec.q, m1, rng, pure_memory=True)
                    fidelity = entanglement_fidelity(plan, net, CorruptionModel.adaptive(adv))
                    self.assertGreaterEqual(fidelity, 1.0 - 1e-9, f"{triple.to_dict()} q={spec.q} sample {k}")
                checked += 1
        self.assertGreater(checked, 10)

    def test_recovery_independent_of_rho0(self):
        """Test mixed, pure and random junk states give the same perfect recovery."""
        rng = np.random.default_rng(21)
        junk_dim = 2 ** self.plan.m_star_star
        choices = ["mixed", "pure", random_density(junk_dim, rng)]
        adversaries = [random_adversary(2, 2, 2, np.random.default_rng(300 + k), pure_memory=k % 2 == 0)
                       for k in range(6)]
        for choice in choices:
            plan = plan_code(self.net, choice)
            for adv in adversaries:
                fidelity = entanglement_fidelity(plan, self.net, CorruptionModel.adaptive(adv))
                self.assertGreaterEqual(fidelity, 1.0 - 1e-9)

    def test_computational_and_fourier_messages(self):
        """Test basis states in both bases pass through with probability 1."""
        cases = [(self.spec, self.net), (FieldSpec(3), gen_lemma_l1(RankTriple(2, 1, 1, 3, 2), FieldSpec(3)))]
        for spec, net in cases:
            plan = plan_code(net)
            n_msg = plan.message_registers
            space = weyl_space(spec, n_msg)
            rng = np.random.default_rng(spec.q)
            for k in range(3):
                adv = random_adversary(spec.q, spec.q, net.m1, rng, pure_memory=False)
                for y in range(space.dim):
                    computational = np.zeros(space.dim, dtype=complex)
                    computational[y] = 1.0
                    fourier = space.fourier_state(space.digits[y])
                    for psi in (computational, fourier):
                        rho_msg = np.outer(psi, psi.conj())
                        out = decode(plan, run_adaptive(net, adv, encode(plan, rho_msg)))
                        self.assertAlmostEqual(float(np.real(np.vdot(psi, out @ psi))), 1.0, places=9)


class TestLinearity(unittest.TestCase):
    """Test the runners act linearly on their input state."""

    def setUp(self):
        """Set up a random dense network with two corruptions over GF(2)."""
        self.rng = np.random.default_rng(31)
        self.net = random_unitary_network(2, 2, FieldSpec(2), self.rng)
        self.rho = random_density(4, self.rng)
        self.sigma = random_density(4, self.rng)

    def assert_linear(self, run):
        a, b = 0.3, 0.7
        mixed = run(a * self.rho + b * self.sigma)
        expected = a * run(self.rho) + b * run(self.sigma)
        self.assertLess(np.max(np.abs(mixed - expected)), 1e-9)

    def test_individual_runner_is_linear(self):
        """Test run_individual on a mixture equals the mixture of outputs."""
        gammas = [random_kraus(2, 3, self.rng) for _ in range(2)]
        self.assert_linear(lambda rho: run_individual(self.net, gammas, rho))

    def test_adaptive_runner_is_linear(self):
        """Test run_adaptive with a mixed memory on a mixture equals the mixture of outputs."""
        adv = random_adversary(2, 2, 2, self.rng, pure_memory=False)
        self.assert_linear(lambda rho: run_adaptive(self.net, adv, rho))


if __name__ == '__main__':
    unittest.main()
