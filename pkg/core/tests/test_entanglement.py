import math

import numpy as np
from django.test import SimpleTestCase
from scipy import stats

from core.amspace import BasisWindow, TruncatedProductBasis, build_interaction_hamiltonian
from core.dynamics import evolve_exact, initial_state
from core.entanglement import (
    density_matrix, entanglement_entropy, log_negativity, log_negativity_pure, partial_trace,
    partial_transpose, relative_entropy_lower_bound, von_neumann_entropy, witness_sum_uncertainty,
)
from core.exceptions import DomainError, NegativeStateError, WindowError

BELL = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)


def random_pure(rng, dim):
    vector = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vector / np.linalg.norm(vector)


def random_density(rng, dim):
    matrix = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = matrix @ matrix.conj().T
    return rho / np.trace(rho).real


class EntropyTests(SimpleTestCase):

    def test_product_state_has_no_entropy(self):
        psi = np.kron([1, 0], [0, 1]).astype(complex)
        self.assertAlmostEqual(entanglement_entropy(psi, (2, 2)), 0.0)

    def test_bell_state_carries_one_bit(self):
        self.assertAlmostEqual(entanglement_entropy(BELL, (2, 2)), 1.0, places=12)

    def test_maximally_mixed(self):
        self.assertAlmostEqual(von_neumann_entropy(np.eye(4) / 4), 2.0, places=12)

    def test_pure_state_marginals_carry_equal_entropy(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            psi = random_pure(rng, 15)
            rho = density_matrix(psi)
            entropy_a = von_neumann_entropy(partial_trace(rho, (3, 5), 'A'))
            entropy_b = von_neumann_entropy(partial_trace(rho, (3, 5), 'B'))
            self.assertAlmostEqual(entropy_a, entropy_b, places=10)
            self.assertAlmostEqual(entropy_a, entanglement_entropy(psi, (3, 5)), places=10)

    def test_negative_eigenvalue_is_rejected(self):
        with self.assertRaises(NegativeStateError):
            von_neumann_entropy(np.diag([1.1, -0.1]))

    def test_relative_entropy_bound_of_bell_state(self):
        self.assertAlmostEqual(relative_entropy_lower_bound(density_matrix(BELL), (2, 2)), 1.0, places=9)

    def test_relative_entropy_bound_of_product_state(self):
        rng = np.random.default_rng(3)
        rho = np.kron(random_density(rng, 3), random_density(rng, 2))
        self.assertAlmostEqual(relative_entropy_lower_bound(rho, (3, 2)), 0.0, places=9)


class PartialOperationTests(SimpleTestCase):

    def setUp(self):
        rng = np.random.default_rng(11)
        self.rho_a = random_density(rng, 3)
        self.rho_b = random_density(rng, 4)
        self.rho = np.kron(self.rho_a, self.rho_b)

    def test_partial_trace_of_product(self):
        np.testing.assert_allclose(partial_trace(self.rho, (3, 4), 'A'), self.rho_a, atol=1e-12)
        np.testing.assert_allclose(partial_trace(self.rho, (3, 4), 'B'), self.rho_b, atol=1e-12)

    def test_partial_transpose_of_product(self):
        expected = np.kron(self.rho_a, self.rho_b.T)
        np.testing.assert_allclose(partial_transpose(self.rho, (3, 4)), expected, atol=1e-12)

    def test_shape_mismatch(self):
        with self.assertRaises(DomainError):
            partial_trace(self.rho, (2, 4))


class LogNegativityTests(SimpleTestCase):

    def test_bell_state(self):
        self.assertAlmostEqual(log_negativity(density_matrix(BELL), (2, 2)), 1.0, places=12)
        self.assertAlmostEqual(log_negativity_pure(BELL, (2, 2)), 1.0, places=12)

    def test_separable_mixture_is_zero(self):
        rng = np.random.default_rng(5)
        rho = sum(np.kron(random_density(rng, 2), random_density(rng, 3)) for _ in range(4)) / 4
        self.assertEqual(log_negativity(rho, (2, 3)), 0.0)

    def test_pure_shortcut_agrees_with_partial_transpose(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            psi = random_pure(rng, 12)
            self.assertAlmostEqual(log_negativity_pure(psi, (3, 4)), log_negativity(density_matrix(psi), (3, 4)),
                                   places=10)

    def test_trace_drift_is_not_entanglement(self):
        rng = np.random.default_rng(5)
        rho = sum(np.kron(random_density(rng, 2), random_density(rng, 3)) for _ in range(4)) / 4
        for drift in (1e-7, -1e-7):
            self.assertAlmostEqual(log_negativity(rho * (1 + drift), (2, 3)), 0.0, places=12)
        self.assertAlmostEqual(log_negativity(density_matrix(BELL) * (1 - 1e-7), (2, 2)), 1.0, places=12)

    def test_zero_trace(self):
        with self.assertRaises(NegativeStateError):
            log_negativity(np.zeros((4, 4)), (2, 2))

    def test_invariant_under_local_unitaries(self):
        rng = np.random.default_rng(31)
        pure = density_matrix(random_pure(rng, 12))
        mixed = 0.8 * pure + 0.2 * random_density(rng, 12)
        for rho in (pure, mixed):
            reference = log_negativity(rho, (3, 4))
            for seed in range(3):
                local = np.kron(stats.unitary_group.rvs(3, random_state=seed),
                                stats.unitary_group.rvs(4, random_state=seed + 10))
                rotated = local @ rho @ local.conj().T
                self.assertAlmostEqual(log_negativity(rotated, (3, 4)), reference, delta=1e-8)


class WitnessTests(SimpleTestCase):

    def full_basis(self, l_a, l_b):
        return TruncatedProductBasis(BasisWindow(l_a, (0,), l_a), BasisWindow(l_b, (0,), l_b))

    def test_top_states_saturate_the_bound(self):
        basis = TruncatedProductBasis(BasisWindow(3, (3,), 2), BasisWindow(3, (3,), 2))
        psi = np.zeros(basis.dimension, dtype=complex)
        psi[basis.index_of_m(3, 3)] = 1.0
        report = witness_sum_uncertainty(density_matrix(psi), basis)
        self.assertAlmostEqual(report.total_variance_sum, 6.0, places=9)
        self.assertFalse(report.violated)
        self.assertAlmostEqual(report.margin, 0.0, places=9)

    def test_top_states_saturate_the_bound_at_large_l(self):
        l = 1.0923e23
        window = BasisWindow(l, (l,), 2)
        basis = TruncatedProductBasis(window, window)
        psi = np.zeros(basis.dimension, dtype=complex)
        psi[basis.index_of_m(l, l)] = 1.0
        report = witness_sum_uncertainty(density_matrix(psi), basis)
        self.assertFalse(report.violated)
        self.assertEqual(report.bound, 2 * l)
        self.assertAlmostEqual(report.total_variance_sum / (2 * l), 1.0, delta=1e-8)
        self.assertLess(abs(report.margin), 1e-8)

    def test_product_states_never_violate(self):
        basis = self.full_basis(2, 2)
        rng = np.random.default_rng(2024)
        for _ in range(50):
            psi = np.kron(random_pure(rng, 5), random_pure(rng, 5))
            report = witness_sum_uncertainty(density_matrix(psi), basis)
            self.assertFalse(report.violated, report)
            self.assertGreaterEqual(report.margin, -1e-9)

    def test_singlet_violates(self):
        basis = self.full_basis(1, 1)
        psi = np.zeros(basis.dimension, dtype=complex)
        for m, sign in ((1, 1), (0, -1), (-1, 1)):
            psi[basis.index_of_m(m, -m)] = sign / math.sqrt(3)
        report = witness_sum_uncertainty(density_matrix(psi), basis)
        self.assertTrue(report.violated)
        self.assertAlmostEqual(report.total_variance_sum, 0.0, places=9)
        self.assertAlmostEqual(report.margin, -1.0, places=9)

    def test_small_cat_states_never_violate(self):
        for l in (1, 2, 3):
            basis = self.full_basis(l, l)
            hamiltonian = build_interaction_hamiltonian(basis, 1.0)
            evolution = evolve_exact(hamiltonian, initial_state(basis, l, l), np.linspace(0.0, 3.0, 31))
            for t, psi in zip(evolution.times, evolution.states):
                report = witness_sum_uncertainty(density_matrix(psi), basis)
                with self.subTest(l=l, t=t):
                    self.assertFalse(report.violated)
                    self.assertGreater(report.margin, 0.0)

    def test_measurement_variance_is_added(self):
        basis = self.full_basis(1, 1)
        psi = np.zeros(basis.dimension, dtype=complex)
        psi[basis.index_of_m(1, 1)] = 1.0
        report = witness_sum_uncertainty(density_matrix(psi), basis, measurement_variance=0.5)
        self.assertAlmostEqual(report.total_variance_sum, 2.5, places=9)

    def test_weight_on_window_edge(self):
        basis = TruncatedProductBasis(BasisWindow(5, (0,), 1), BasisWindow(0, (0,), 0))
        psi = np.zeros(basis.dimension, dtype=complex)
        psi[basis.index_of_m(1, 0)] = 1.0
        with self.assertRaises(WindowError):
            witness_sum_uncertainty(density_matrix(psi), basis)
