import unittest

import numpy as np

from chi2path.core import C_LIGHT, DomainError, ForbiddenProcessError, KinematicSingularityError
from chi2path.greens import DressedPropagator
from chi2path.media import MediumProfile
from chi2path.nonlinear import (Chi2Medium, PumpField, ThreeWaveKinematics, biphoton_1d_analytic, biphoton_numeric,
                                effective_coupling, frequency_mismatch, is_energy_allowed, phase_matching_summary,
                                phase_mismatch, spdc_probability)


class TestCoupling(unittest.TestCase):
    pump = PumpField(3., .5, 1., 2.)
    medium = Chi2Medium(2., (0., 1.))

    def test_pump(self):
        self.assertAlmostEqual(self.pump.complex_amplitude, 3. * np.exp(.5j), places=14)
        self.assertEqual(self.pump.k_p, 2. + 0j)
        with self.assertRaises(DomainError):
            PumpField(-1., 0., 1.)
        with self.assertRaises(DomainError):
            PumpField(1., 0., 0.)

    def test_medium(self):
        self.assertEqual(self.medium.length, 1.)
        self.assertEqual(self.medium.chi(1., .5), 2.)
        self.assertEqual(self.medium.chi(1., 1.5), 0.)
        self.assertTrue(self.medium.linear.is_homogeneous())
        graded = Chi2Medium(lambda omega, x: x, (0., 2.))
        self.assertIsNone(graded.constant)
        self.assertEqual(graded.chi(1., 1.5), 1.5)
        with self.assertRaises(DomainError):
            Chi2Medium(1., (1., 0.))
        with self.assertRaises(DomainError):
            Chi2Medium(1., (0., np.inf))
        with self.assertRaises(DomainError):
            Chi2Medium(lambda omega, x: np.inf, (0., 1.))

    def test_effective_coupling(self):
        self.assertAlmostEqual(effective_coupling(self.medium, self.pump, .25), 6. * np.exp(1j), places=14)
        self.assertEqual(effective_coupling(self.medium, self.pump, -.25), 0j)


class TestKinematics(unittest.TestCase):
    pump = PumpField(1., 0., 1., 2.)

    def test_mismatch(self):
        kin = ThreeWaveKinematics(.4, .6, -1., -.5, self.pump)
        self.assertEqual(frequency_mismatch(kin), 0.)
        self.assertTrue(is_energy_allowed(kin))
        self.assertEqual(phase_mismatch(kin), .5 + 0j)
        self.assertEqual(phase_mismatch(kin, 'co'), 3.5 + 0j)
        with self.assertRaises(DomainError):
            phase_mismatch(kin, 'sideways')

    def test_energy_filter(self):
        kin = ThreeWaveKinematics(.4, .5, -1., -1., self.pump)
        self.assertAlmostEqual(frequency_mismatch(kin), .1, places=15)
        self.assertFalse(is_energy_allowed(kin))
        self.assertTrue(is_energy_allowed(kin, tolerance=.2))
        with self.assertRaises(DomainError):
            ThreeWaveKinematics(0., 1., 1., 1., self.pump)


class TestBiphoton(unittest.TestCase):
    bulk = MediumProfile.homogeneous(2.25)
    G = DressedPropagator(bulk, 'analytic')

    def kinematics(self, k_p):
        return ThreeWaveKinematics(C_LIGHT, C_LIGHT, -1.5, 1.5, PumpField(1., 0., 2. * C_LIGHT, k_p))

    def test_analytic_closed_form(self):
        kin = ThreeWaveKinematics(.5, .5, -1., -1., PumpField(2., .3, 1., 2.))
        medium = Chi2Medium(.4, (0., 1.5))
        value = biphoton_1d_analytic(medium, kin, 1., .2)
        expected = .4 * 2. * np.exp(.3j) / 4. * np.exp(1.2j) * 1.5
        self.assertAlmostEqual(value, expected, places=14)
        self.assertEqual(biphoton_1d_analytic(medium, kin, .2, 1.), 0j)
        self.assertAlmostEqual(biphoton_1d_analytic(medium, kin, .2, .2), .5 * .4 * 2. * np.exp(.3j) / 4. *
                               np.exp(.4j) * 1.5, places=14)

    def test_analytic_phase_mismatch(self):
        kin = ThreeWaveKinematics(.5, .5, -1., -1., PumpField(1., 0., 1., 2. + 2. * np.pi))
        medium = Chi2Medium(.4, (0., 1.))
        self.assertAlmostEqual(abs(biphoton_1d_analytic(medium, kin, 1., 0.)), 0., places=15)
        self.assertAlmostEqual(abs(biphoton_1d_analytic(medium, kin, 1., 0., convention='co')), 0.1 * abs(
            np.sinc((2. + 2. * np.pi + 2.) / 2. / np.pi)), places=14)

    def test_analytic_errors(self):
        medium = Chi2Medium(.4, (0., 1.))
        forbidden = ThreeWaveKinematics(.5, .6, -1., -1., PumpField(1., 0., 1.))
        with self.assertRaises(ForbiddenProcessError):
            biphoton_1d_analytic(medium, forbidden, 1., 0.)
        with self.assertRaises(KinematicSingularityError):
            biphoton_1d_analytic(medium, ThreeWaveKinematics(.5, .5, 0., -1., PumpField(1., 0., 1.)), 1., 0.)
        with self.assertRaises(DomainError):
            biphoton_1d_analytic(Chi2Medium(lambda omega, x: .4, (0., 1.)), forbidden._replace(omega_i=.5), 1., 0.)

    def test_debug_logs_dropped_term(self):
        kin = ThreeWaveKinematics(.5, .5, -1., -1., PumpField(1., 0., 1., 2.))
        with self.assertLogs('chi2path.nonlinear', level='DEBUG') as logs:
            biphoton_1d_analytic(Chi2Medium(.4, (0., 1.)), kin, 1., 0., debug=True)
        self.assertIn('co convention', logs.output[0])

    def test_numeric_matches_closed_form(self):
        for L in np.linspace(.5, 2., 4):
            medium = Chi2Medium(.3, (0., L), linear=self.bulk)
            x, y = L + .5, -.5
            for k_p in (-2., -1., 0., 1., 2.5):
                kin = self.kinematics(k_p)
                numeric = biphoton_numeric(medium, kin, self.G, self.G, x, y)
                closed = biphoton_1d_analytic(medium, kin, x, y)
                scale = .3 * L / (4. * 2.25)
                self.assertLess(abs(abs(numeric) - abs(closed)), 1e-7 * scale, msg='L=%g k_p=%g' % (L, k_p))
                if k_p == 0.:
                    self.assertLess(abs(numeric - closed), 1e-7 * scale)

    def test_numeric_additive_over_regions(self):
        kin = self.kinematics(.5)
        x, y = 2.5, -.5

        def profile(scale):
            return lambda omega, z: scale * np.sin(np.pi * z) ** 2

        def whole_chi(omega, z):
            return (.3 if z < 1. else .7) * np.sin(np.pi * z) ** 2

        whole = biphoton_numeric(Chi2Medium(whole_chi, (0., 2.), linear=self.bulk), kin, self.G, self.G, x, y)
        parts = sum(biphoton_numeric(Chi2Medium(profile(scale), extent, linear=self.bulk), kin, self.G, self.G, x, y)
                    for scale, extent in ((.3, (0., 1.)), (.7, (1., 2.))))
        self.assertLess(abs(whole - parts), 1e-8 * abs(parts))

    def test_numeric_linear_in_pump(self):
        medium = Chi2Medium(.3, (0., 1.), linear=self.bulk)
        kin = self.kinematics(1.)
        base = biphoton_numeric(medium, kin, self.G, self.G, 1.5, -.5)
        for amplitude in (.5, 2.5, 10.):
            scaled = kin._replace(pump=kin.pump._replace(amplitude=amplitude))
            value = biphoton_numeric(medium, scaled, self.G, self.G, 1.5, -.5)
            self.assertLess(abs(value - amplitude * base), 1e-9 * amplitude * abs(base))

    def test_zero_susceptibility(self):
        kin = self.kinematics(1.)
        for chi in (0., lambda omega, z: 0.):
            medium = Chi2Medium(chi, (0., 1.), linear=self.bulk)
            self.assertEqual(biphoton_numeric(medium, kin, self.G, self.G, 1.5, -.5), 0j)
        self.assertEqual(biphoton_1d_analytic(Chi2Medium(0., (0., 1.)), kin, 1.5, -.5), 0j)

    def test_numeric_forbidden(self):
        medium = Chi2Medium(.3, (0., 1.), linear=self.bulk)
        kin = self.kinematics(0.)._replace(omega_i=.5 * C_LIGHT)
        with self.assertLogs('chi2path.nonlinear', level='WARNING'):
            self.assertEqual(biphoton_numeric(medium, kin, self.G, self.G, 1.5, -.5), 0j)


class TestPhaseMatching(unittest.TestCase):

    def test_probability(self):
        self.assertEqual(spdc_probability(2., 0.), 4.)
        self.assertAlmostEqual(spdc_probability(1., 2. * np.pi), 0., places=30)
        self.assertAlmostEqual(spdc_probability(1., np.pi), 4. / np.pi ** 2, places=14)
        np.testing.assert_allclose(spdc_probability(np.array([1., 2.]), 0.), [1., 4.])
        with self.assertRaises(DomainError):
            spdc_probability(0., 1.)

    def test_summary(self):
        dk = np.linspace(-10. * np.pi, 10. * np.pi, 401)
        summary = phase_matching_summary(dk, spdc_probability(1., dk))
        self.assertAlmostEqual(summary['peak_dk'], 0., places=12)
        self.assertAlmostEqual(summary['peak_value'], 1., places=12)
        self.assertAlmostEqual(summary['first_zero_left'], -2. * np.pi, places=9)
        self.assertAlmostEqual(summary['first_zero_right'], 2. * np.pi, places=9)

    def test_summary_zero_outside_sweep(self):
        dk = np.linspace(-1., 1., 21)
        summary = phase_matching_summary(dk, spdc_probability(1., dk))
        self.assertIsNone(summary['first_zero_left'])
        self.assertIsNone(summary['first_zero_right'])


if __name__ == '__main__':
    unittest.main()
