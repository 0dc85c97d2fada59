import math

import numpy as np
from django.test import SimpleTestCase

from core.amspace import BasisWindow, TruncatedProductBasis, build_interaction_hamiltonian, symmetric_basis
from core.dynamics import (
    ENTROPY_CURVE_COLUMNS, auto_converged_window, entropy_closed_form, entropy_curve, evolve_exact,
    initial_state, perturbative_state,
)
from core.entanglement import entanglement_entropy, log_negativity_pure
from core.exceptions import DomainError, OutOfRegimeError
from core.params import derive_scales, nominal_config


class ClosedFormTests(SimpleTestCase):

    def test_zero_coupling(self):
        self.assertEqual(entropy_closed_form(0.0, 0.0), 0.0)

    def test_nominal_value_at_ten_seconds(self):
        value = entropy_closed_form(5.84e-4, 0.0)
        self.assertAlmostEqual(value / 1.56e-5, 1.0, delta=0.02)

    def test_kappa_above_g(self):
        with self.assertRaises(DomainError):
            entropy_closed_form(1e-3, 2e-3)

    def test_out_of_regime(self):
        with self.assertRaises(OutOfRegimeError):
            entropy_closed_form(1.0, 0.0)

    def test_ordering_in_m(self):
        # kappa = g (m/l)^2
        for g in (1e-4, 5.84e-4, 1e-3):
            at_zero = entropy_closed_form(g, 0.0)
            at_fraction = entropy_closed_form(g, 0.09 * g)
            at_top = entropy_closed_form(g, g)
            self.assertGreater(at_top, at_zero)
            self.assertGreater(at_zero, at_fraction)


class ExactEvolutionTests(SimpleTestCase):

    def setUp(self):
        self.basis = TruncatedProductBasis(BasisWindow(3, (0,), 3), BasisWindow(3, (0,), 3))
        self.alpha = 2e-3 / 9
        self.hamiltonian = build_interaction_hamiltonian(self.basis, self.alpha)
        self.psi0 = initial_state(self.basis, 1, 1)

    def test_norm_is_preserved(self):
        result = evolve_exact(self.hamiltonian, self.psi0, np.linspace(0, 500, 6), self.basis)
        np.testing.assert_allclose(np.linalg.norm(result.states, axis=1), 1.0, atol=1e-10)
        np.testing.assert_allclose(result.states[0], self.psi0, atol=1e-12)

    def test_zero_hamiltonian_is_stationary(self):
        result = evolve_exact(np.zeros_like(self.hamiltonian), self.psi0, [0.0, 1.0, 2.0])
        for state in result.states:
            np.testing.assert_array_equal(state, self.psi0)

    def test_unsorted_times(self):
        with self.assertRaises(DomainError):
            evolve_exact(self.hamiltonian, self.psi0, [1.0, 0.0])

    def test_perturbative_state_matches_at_small_g(self):
        exact = evolve_exact(self.hamiltonian, self.psi0, [1.0]).states[0]
        approximate, guard_ok = perturbative_state(self.psi0, self.basis, self.alpha, 1.0)
        self.assertTrue(guard_ok)
        self.assertLess(np.linalg.norm(exact - approximate), 1e-6)

    def test_perturbative_guard(self):
        _, guard_ok = perturbative_state(self.psi0, self.basis, self.alpha, 1.0, guard=1e-4)
        self.assertFalse(guard_ok)

    def test_evolution_is_reversible(self):
        forward = evolve_exact(self.hamiltonian, self.psi0, [500.0]).states[0]
        back = evolve_exact(-self.hamiltonian, forward, [500.0]).states[0]
        np.testing.assert_allclose(back, self.psi0, atol=1e-10)

    def test_evolution_composes(self):
        halfway = evolve_exact(self.hamiltonian, self.psi0, [200.0]).states[0]
        twice = evolve_exact(self.hamiltonian, halfway, [300.0]).states[0]
        direct = evolve_exact(self.hamiltonian, self.psi0, [500.0]).states[0]
        np.testing.assert_allclose(twice, direct, atol=1e-10)

    def test_matches_taylor_series(self):
        window = BasisWindow(1, (0,), 1)
        basis = TruncatedProductBasis(window, window)
        hamiltonian = build_interaction_hamiltonian(basis, 1.0)
        rng = np.random.default_rng(8)
        psi0 = rng.normal(size=basis.dimension) + 1j * rng.normal(size=basis.dimension)
        psi0 /= np.linalg.norm(psi0)
        t = 0.1
        expected = psi0.copy()
        term = psi0.copy()
        for k in range(1, 30):
            term = (-1j * t / k) * (hamiltonian @ term)
            expected = expected + term
        np.testing.assert_allclose(evolve_exact(hamiltonian, psi0, [t]).states[0], expected, atol=1e-10)

    def test_perturbative_error_is_third_order(self):
        couplings = np.array([1e-4, 1e-3, 1e-2])
        errors = []
        for g in couplings:
            alpha = 2 * g / 9
            hamiltonian = build_interaction_hamiltonian(self.basis, alpha)
            exact = evolve_exact(hamiltonian, self.psi0, [1.0]).states[0]
            approximate, _ = perturbative_state(self.psi0, self.basis, alpha, 1.0)
            errors.append(np.linalg.norm(exact - approximate))
        slope = np.polyfit(np.log(couplings), np.log(errors), 1)[0]
        self.assertAlmostEqual(slope, 3.0, delta=0.1)
        scaled = np.array(errors) / couplings ** 3
        self.assertLess(scaled.max() / scaled.min(), 1.2)


class NominalEntropyTests(SimpleTestCase):

    def setUp(self):
        self.scales = derive_scales(nominal_config())

    def time_for_g(self, g):
        return 2 * g / (self.scales.alpha * self.scales.l_a * self.scales.l_b)

    def exact_entropy(self, m_over_l, t, half_width=6):
        m_a = m_over_l * self.scales.l_a
        m_b = m_over_l * self.scales.l_b
        basis = symmetric_basis(self.scales.l_a, self.scales.l_b, m_a, m_b, half_width)
        hamiltonian = build_interaction_hamiltonian(basis, self.scales.alpha)
        state = evolve_exact(hamiltonian, initial_state(basis, m_a, m_b), [t]).states[0]
        return entanglement_entropy(state, basis)

    def test_closed_form_agrees_with_exact_evolution(self):
        for g in (1e-4, 1e-3):
            t = self.time_for_g(g)
            for m_over_l in (0.0, 1.0):
                kappa = self.scales.coupling_kappa(m_over_l * self.scales.l_a, t)
                closed = entropy_closed_form(g, min(kappa, g))
                exact = self.exact_entropy(m_over_l, t)
                self.assertAlmostEqual(exact / closed, 1.0, delta=0.05, msg=f'g={g}, m/l={m_over_l}')

    def test_default_window_is_converged(self):
        self.assertEqual(auto_converged_window(self.scales, 0.0, 10.0), 6)

    def test_unitary_negativity_rate_of_the_cat_state(self):
        l_a, l_b = self.scales.l_a, self.scales.l_b
        basis = symmetric_basis(l_a, l_b, l_a, l_b, 6)
        hamiltonian = build_interaction_hamiltonian(basis, self.scales.alpha)
        start, end = evolve_exact(hamiltonian, initial_state(basis, l_a, l_b), [0.0, 10.0]).states
        rate = (log_negativity_pure(end, basis) - log_negativity_pure(start, basis)) / 10.0
        self.assertAlmostEqual(rate / 7e-4, 1.0, delta=0.3)
        self.assertAlmostEqual(rate / self.scales.entangling_rate(), 1.0, delta=0.01)

    def test_entropy_curve_frame(self):
        frame = entropy_curve(nominal_config(), [1.0, 0.0], [0.0, 10.0])
        self.assertEqual(list(frame.columns), ENTROPY_CURVE_COLUMNS)
        self.assertEqual(list(frame['m_over_l']), [0.0, 0.0, 1.0, 1.0])
        at_start = frame[frame['t_seconds'] == 0.0]
        self.assertTrue(np.allclose(at_start['entropy_exact_bits'], 0.0, atol=1e-12))
        at_end = frame[frame['t_seconds'] == 10.0].set_index('m_over_l')
        self.assertGreater(at_end.loc[1.0, 'entropy_exact_bits'], at_end.loc[0.0, 'entropy_exact_bits'])
        self.assertTrue(math.isclose(at_end.loc[0.0, 'entropy_closed_bits'], 1.56e-5, rel_tol=0.02))

    def test_m_over_l_outside_range(self):
        with self.assertRaises(DomainError):
            entropy_curve(nominal_config(), [1.5], [0.0, 1.0])
