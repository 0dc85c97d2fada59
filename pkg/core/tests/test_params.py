import math

from django.test import SimpleTestCase

from core.exceptions import DomainError
from core.params import CODATA, coupling_alpha, derive_scales, nominal_config, validate_config


class DerivedScalesTests(SimpleTestCase):

    def setUp(self):
        self.config = nominal_config()
        self.scales = derive_scales(self.config)

    def assertRelative(self, value, expected, tolerance):
        self.assertLessEqual(abs(value - expected) / abs(expected), tolerance, f'{value} vs {expected}')

    def test_nominal_alpha(self):
        self.assertRelative(self.scales.alpha, 9.79e-51, 0.01)

    def test_nominal_angular_momentum(self):
        self.assertRelative(self.scales.sphere_a.angular_momentum, 1.152e-11, 0.01)
        self.assertRelative(self.scales.l_a, 1.092e23, 0.01)
        self.assertEqual(self.scales.l_a, self.scales.l_b)

    def test_coupling_g_at_ten_seconds(self):
        self.assertRelative(self.scales.coupling_g(10.0), 5.84e-4, 0.01)
        self.assertEqual(self.scales.coupling_g(0.0), 0.0)

    def test_gravitational_energy(self):
        self.assertRelative(self.scales.V_G, 1.23e-38, 0.01)
        self.assertRelative(self.scales.V_G, self.scales.alpha * CODATA.hbar * self.scales.l_a ** 2, 1e-12)

    def test_kappa_equals_g_at_m_equal_l(self):
        self.assertRelative(self.scales.coupling_kappa(self.scales.l_a, 3.0), self.scales.coupling_g(3.0), 1e-12)

    def test_entangling_rate(self):
        self.assertRelative(self.scales.entangling_rate(), 7e-4, 0.3)

    def test_alpha_scales_as_inverse_cube(self):
        ratio = coupling_alpha(2e-4) / coupling_alpha(4e-4)
        self.assertAlmostEqual(ratio, 8.0, places=10)

    def test_as_dict_lists_every_scale(self):
        values = self.scales.as_dict()
        for key in ('alpha', 'l_a', 'l_b', 'V_G', 'inertia_a', 'mass_b'):
            self.assertIn(key, values)


class ValidationTests(SimpleTestCase):

    def test_nominal_config_is_valid(self):
        self.assertEqual(validate_config(nominal_config()), [])

    def test_overlapping_spheres_rejected(self):
        config = nominal_config().with_changes(separation=90e-6)
        self.assertIn('separation ≤ contact distance', validate_config(config))
        with self.assertRaises(DomainError):
            derive_scales(config)

    def test_negative_temperature_rejected(self):
        config = nominal_config().with_changes(bath_temperature=-1.0)
        self.assertIn('bath_temperature negative', validate_config(config))

    def test_zero_rotation_gives_zero_l(self):
        config = nominal_config()
        sphere = config.sphere_a.__class__(angular_velocity=0.0)
        scales = derive_scales(config.with_changes(sphere_a=sphere, sphere_b=sphere))
        self.assertEqual(scales.l_a, 0.0)
        self.assertEqual(scales.V_G, 0.0)

    def test_volume(self):
        sphere = nominal_config().sphere_a
        self.assertAlmostEqual(sphere.volume, 4 / 3 * math.pi * 50e-6 ** 3, delta=1e-25)
