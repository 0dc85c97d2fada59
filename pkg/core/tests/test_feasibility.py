import math
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import DomainError, SingularTimeError
from core.feasibility import (
    BUDGET_COLUMNS, FAIL, INFO, MARGINAL, PASS, barnett_polarization, budget_frame, budget_report, casimir_energy,
    classify, detection_trap, detection_variance_map, electric_dipole_suppression, ellipticity_threshold,
    laser_heating_final_temperature, magnetic_dipole_budget, required_resolution, spheroid_coefficient,
    spheroid_quadrupole, trap_frequency,
)
from core.params import CODATA, ELEMENTARY_CHARGE, derive_scales, nominal_config, sphere_scales

NOMINAL_DIPOLE = 100 * ELEMENTARY_CHARGE * 1e-6


class FeasibilityTestCase(SimpleTestCase):

    def setUp(self):
        self.config = nominal_config()
        self.scales = derive_scales(self.config)
        self.V_G = self.scales.V_G

    def assertRelative(self, value, expected, tolerance):
        self.assertLessEqual(abs(value - expected) / abs(expected), tolerance, f'{value} vs {expected}')


class ClassifyTests(SimpleTestCase):

    def test_thresholds(self):
        self.assertEqual(classify(0.2, 1.0, 3.0), PASS)
        self.assertEqual(classify(1.0, 1.0, 3.0), MARGINAL)
        self.assertEqual(classify(4.0, 1.0, 3.0), FAIL)
        self.assertEqual(classify(0.0, 0.0, 3.0), PASS)
        self.assertEqual(classify(1e-40, 0.0, 3.0), FAIL)


class EnergyEstimateTests(FeasibilityTestCase):

    def test_barnett_polarization(self):
        p = barnett_polarization(0.1, 1.0, 1e7, 8e6)
        self.assertTrue(1e-3 <= p <= 2e-3, p)
        self.assertEqual(barnett_polarization(0.0, 1.0, 1e7, 8e6), 1.0)
        self.assertEqual(barnett_polarization(0.1, 0.0, 0.0, 8e6), 0.0)

    def test_magnetic_line(self):
        line = magnetic_dipole_budget(0.1, 1.0, 1e7, 1e9, self.V_G)
        p = barnett_polarization(0.1, 1.0, 1e7, 8e6)
        self.assertAlmostEqual(line.value, 1e-28 * p ** 2)
        self.assertTrue(0.5 <= line.ratio / (1e10 * p ** 2) <= 1.5)
        self.assertEqual(line.status, FAIL)

    def test_magnetic_line_without_field_or_rotation(self):
        line = magnetic_dipole_budget(0.1, 0.0, 0.0, 1e9, self.V_G)
        self.assertEqual(line.value, 0.0)
        self.assertEqual(line.status, PASS)

    def test_electric_suppression(self):
        line = electric_dipole_suppression(NOMINAL_DIPOLE, 1e7, 1.0, 200e-6, math.pi / 2, self.V_G)
        self.assertRelative(line.value, 2.9e-39, 0.1)
        self.assertEqual(line.status, PASS)

    def test_small_tilt_stays_below_gravity(self):
        line = electric_dipole_suppression(NOMINAL_DIPOLE, 1e7, 1.0, 200e-6, math.pi / 2 - 1e-7, self.V_G)
        self.assertTrue(1e-39 < line.value < 1e-38, line.value)
        self.assertLess(line.value, self.V_G)

    def test_phase_resolved_stays_inside_envelope(self):
        envelope = electric_dipole_suppression(1e-23, 1e7, 1.0, 200e-6, math.pi / 2, self.V_G)
        resolved = electric_dipole_suppression(1e-23, 1e7, 1.0, 200e-6, math.pi / 2, self.V_G, phase_resolved=True)
        self.assertLessEqual(resolved.value, 4 * envelope.value)

    def test_spheroid(self):
        mass = self.scales.sphere_a.mass
        coefficient = spheroid_coefficient(mass, mass, 50e-6, 50e-6, 200e-6)
        self.assertRelative(coefficient, 5.4e-29, 0.1)
        self.assertTrue(1e-5 < ellipticity_threshold(coefficient, self.V_G) < 2e-5)
        line = spheroid_quadrupole(mass, mass, 50e-6, 50e-6, 0.0, 1e-5, 200e-6, self.V_G)
        self.assertEqual(line.value, 0.0)

    def test_casimir(self):
        base = casimir_energy(50e-6, 3.9, 200e-6, self.V_G)
        self.assertEqual(base.status, INFO)
        self.assertTrue(base.passed)
        self.assertAlmostEqual(casimir_energy(50e-6, 3.9, 400e-6, self.V_G).value / base.value, 2 ** -7)
        self.assertAlmostEqual(casimir_energy(100e-6, 3.9, 400e-6, self.V_G).value
                               / casimir_energy(50e-6, 3.9, 400e-6, self.V_G).value, 64.0)
        self.assertEqual(casimir_energy(50e-6, 1.0, 200e-6, self.V_G).value, 0.0)
        with self.assertRaises(DomainError):
            casimir_energy(50e-6, 3.9, 100e-6, self.V_G)

    def test_laser_heating(self):
        sphere = self.config.sphere_a
        arguments = dict(initial_temperature=1.0, target_rotation=1e7, wavelength=300e-9, radius=sphere.radius,
                         density=sphere.density, refractive_index=sphere.refractive_index, debye_coefficient=3e-4)
        self.assertAlmostEqual(laser_heating_final_temperature(**arguments), 1.13, delta=0.03)
        self.assertEqual(laser_heating_final_temperature(**{**arguments, 'target_rotation': 0.0}), 1.0)
        self.assertEqual(laser_heating_final_temperature(**{**arguments, 'refractive_index': 1.47}), 1.0)


class DetectionTests(FeasibilityTestCase):

    def test_trap_sides(self):
        report = detection_trap(self.config)
        self.assertRelative(report.field_side, 2.5e3, 0.2)
        self.assertAlmostEqual(report.angular_side, 1.5625)
        self.assertEqual(report.lines[0].status, PASS)

    def test_gradient_scaling(self):
        base = detection_trap(self.config)
        stronger = detection_trap(self.config, field_gradient=4e6)
        self.assertAlmostEqual(stronger.trap_frequency / base.trap_frequency, 4.0)
        self.assertAlmostEqual(stronger.coupling / base.coupling, 2.0)

    def test_required_resolution(self):
        resolution = required_resolution(self.config, 10.0)
        self.assertAlmostEqual(resolution / 1e-6, 1.0, delta=0.5)
        self.assertAlmostEqual(resolution / (1e6 * 10.0 ** 2) / 1e-14, 1.0, delta=0.5)

    def test_equal_variances_give_zero(self):
        self.assertEqual(detection_variance_map(1e-12, 1e-12, 1e-3, self.config), 0.0)

    def test_singular_time(self):
        omega = trap_frequency(self.config.sphere_a, self.config.field_gradient)
        with self.assertRaises(SingularTimeError):
            detection_variance_map(2e-12, 1e-12, 4 * math.pi / omega, self.config)

    def test_shrinking_variance(self):
        with self.assertRaises(DomainError):
            detection_variance_map(1e-12, 2e-12, 1e-3, self.config)

    def test_variance_map_recovers_angular_momentum_spread(self):
        report = detection_trap(self.config)
        mass = sphere_scales(self.config.sphere_a).mass
        omega = report.trap_frequency
        t = 1e-3
        # z(t) = z(0) + sqrt(hbar / 2 m Omega) (4 lambda / Omega) sin^2(Omega t / 2) L_z
        kick = math.sqrt(CODATA.hbar / (2 * mass * omega)) * 4 * report.coupling / omega * math.sin(omega * t / 2) ** 2
        rng = np.random.default_rng(42)
        spread = math.sqrt(self.scales.l_a) * CODATA.hbar
        l_z = rng.normal(0.0, spread, size=100_000)
        z_0 = rng.normal(0.0, 0.1 * kick * spread, size=l_z.size)
        z_t = z_0 + kick * l_z
        recovered = detection_variance_map(np.var(z_t), np.var(z_0), t, self.config)
        self.assertAlmostEqual(recovered / np.var(l_z), 1.0, delta=0.01)


class BudgetTests(FeasibilityTestCase):

    def statuses(self, config):
        return {line.name: line.status for line in budget_report(config)}

    def test_nominal_budget(self):
        statuses = self.statuses(self.config)
        self.assertEqual(statuses['magnetic dipole (Barnett)'], FAIL)
        self.assertEqual(statuses['electric dipole'], PASS)
        self.assertEqual(statuses['spheroid quadrupole'], MARGINAL)
        self.assertEqual(statuses['Casimir-Polder'], INFO)
        self.assertEqual(statuses['black-body absorption'], PASS)
        self.assertEqual(statuses['laser heating'], INFO)
        self.assertEqual(statuses['gas collisions'], MARGINAL)

    def test_warm_bath_fails_black_body_line(self):
        statuses = self.statuses(self.config.with_changes(bath_temperature=2.0))
        self.assertEqual(statuses['black-body absorption'], FAIL)

    def test_noise_free_configuration_passes(self):
        sphere = replace(self.config.sphere_a, nuclear_spins=0.0)
        noise = replace(self.config.noise, dipole_moment=0.0, ellipticity=0.0)
        config = self.config.with_changes(sphere_a=sphere, sphere_b=sphere, noise=noise,
                                          bath_temperature=0.0, gas_pressure=0.0)
        self.assertTrue(all(line.passed for line in budget_report(config)))

    def test_frame(self):
        frame = budget_frame(budget_report(self.config))
        self.assertEqual(list(frame.columns[:len(BUDGET_COLUMNS)]), BUDGET_COLUMNS)
        self.assertEqual(len(frame), 7)
