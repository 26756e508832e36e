import unittest
import warnings
from os.path import dirname, join

import numpy as np

from chi2path.core import EPSILON_0, DomainError, EdgePoleWarning, GainWarning
from chi2path.media import (HuttnerBarnettModel, MediumProfile, TabulatedFunction, effective_epsilon,
                            gamma_tilde, gaussian_closed_form, gaussian_identity_selftest, lorentz_epsilon,
                            negative_frequency_epsilon, reservoir_kernel, scaled_resonance)


class TestTabulatedFunction(unittest.TestCase):
    table = TabulatedFunction.from_csv(join(dirname(__file__), 'files', 'coupling.csv'))

    def test_interpolation(self):
        self.assertEqual(self.table(1.5), .75)
        self.assertEqual(self.table(-1.), 0.)
        self.assertEqual(self.table(4.5), 0.)
        np.testing.assert_allclose(self.table(np.array([.5, 3.5])), [.25, .25])
        self.assertEqual(list(self.table.nodes), [0., 1., 2., 3., 4.])

    def test_complex(self):
        f = TabulatedFunction([0., 1.], [0., 2. + 2j])
        self.assertEqual(f(.5), 1. + 1j)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            TabulatedFunction([0., 0., 1.], [1., 2., 3.])
        with self.assertRaises(DomainError):
            TabulatedFunction([0.], [1.])


class TestMediumProfile(unittest.TestCase):
    slab = MediumProfile([(0., 1., 2.25), (1., 2., lambda w: 1. + w)], g=.5, label='stack')

    def test_epsilon(self):
        self.assertEqual(self.slab.epsilon(3., .5), 2.25 + 0j)
        self.assertEqual(self.slab.epsilon(3., 1.), 4. + 0j)  # half-open regions
        self.assertEqual(self.slab.epsilon(3., 2.), 1. + 0j)
        self.assertEqual(self.slab.epsilon(3., -1e-9), 1. + 0j)
        self.assertAlmostEqual(self.slab.refractive_index(3., .5), 1.5 + 0j, places=14)

    def test_geometry(self):
        self.assertEqual(self.slab.g(.5), .5)
        self.assertEqual(self.slab.g(5.), 0.)
        self.assertEqual(self.slab.boundaries(), [0., 1., 2.])
        self.assertEqual(self.slab.finite_extent(), (0., 2.))
        self.assertFalse(self.slab.is_homogeneous())
        with self.assertRaises(DomainError):
            self.slab.bulk_epsilon(1.)

    def test_homogeneous(self):
        bulk = MediumProfile.homogeneous(2.)
        self.assertTrue(bulk.is_homogeneous())
        self.assertIsNone(bulk.finite_extent())
        self.assertEqual(bulk.bulk_epsilon(1.), 2. + 0j)
        self.assertTrue(MediumProfile.vacuum().is_homogeneous())
        self.assertEqual(MediumProfile.vacuum().bulk_epsilon(1.), 1. + 0j)

    def test_invalid_regions(self):
        with self.assertRaises(DomainError):
            MediumProfile([(0., 1., 2.), (.5, 2., 2.)])
        with self.assertRaises(DomainError):
            MediumProfile([(1., 1., 2.)])

    def test_gain_warning(self):
        gain = MediumProfile([(0., 1., 2. - .1j)])
        with self.assertWarns(GainWarning):
            gain.epsilon(1., .5)

    def test_from_model(self):
        model = HuttnerBarnettModel(2., .5, 1., 0., 10.)
        medium = MediumProfile.from_model(model, 0., 1.)
        self.assertAlmostEqual(medium.epsilon(1., .5), lorentz_epsilon(2., .5, 1., 1.), places=12)
        self.assertEqual(medium.epsilon(-1., .5), medium.epsilon(1., .5).conjugate())
        self.assertEqual(medium.epsilon(1., 2.), 1. + 0j)


class TestOscillatorModel(unittest.TestCase):
    coupled = HuttnerBarnettModel(1., 1., EPSILON_0, 1., 3., eta=1e-3)
    uncoupled = HuttnerBarnettModel(2., .5, 1., 0., 10.)

    @staticmethod
    def kernel_oracle(Omega, W, eta):
        a = np.sqrt(Omega ** 2 + 1j * eta)
        return W + a / 2. * (np.log(W - a) - np.log(W + a) - np.log(-a) + np.log(a))

    def test_model_validation(self):
        with self.assertRaises(DomainError):
            HuttnerBarnettModel(1., -1., 1., 0., 3.)
        with self.assertRaises(DomainError):
            HuttnerBarnettModel(1., 1., 1., 0., .5)
        with self.assertRaises(DomainError):
            HuttnerBarnettModel(1., 1., 1., lambda w: np.inf, 3.)

    def test_scaled_resonance(self):
        self.assertEqual(scaled_resonance(self.uncoupled), 4.)
        model = HuttnerBarnettModel(1., 1., EPSILON_0, 1., 2.)
        self.assertAlmostEqual(scaled_resonance(model), 3., places=10)
        table = TabulatedFunction.from_csv(join(dirname(__file__), 'files', 'coupling.csv'))
        tabulated = HuttnerBarnettModel(2., .5, EPSILON_0, table, 4.)
        self.assertAlmostEqual(scaled_resonance(tabulated), 4. + 8. / 3., places=10)

    def test_reservoir_kernel(self):
        for Omega in (.01, .7, 1.5, 2.9, 4.):
            expected = self.kernel_oracle(Omega, 3., 1e-3)
            value = reservoir_kernel(self.coupled, Omega)
            self.assertLess(abs(value - expected) / abs(expected), 1e-7, msg='Omega = %g' % Omega)
        self.assertEqual(reservoir_kernel(self.uncoupled, 1.), 0j)
        with self.assertRaises(DomainError):
            reservoir_kernel(self.coupled, -1.)

    def test_tabulated_kernel(self):
        table = TabulatedFunction.from_csv(join(dirname(__file__), 'files', 'coupling.csv'))
        model = HuttnerBarnettModel(2., .5, 1., table, 20., eta=1e-2)
        w = np.linspace(0., 20., 2000001)
        h = w ** 2 * table(w) ** 2
        for Omega in (.5, 1., 1.5, 3., 5.):
            g = h / (w ** 2 - Omega ** 2 - 1e-2j)
            expected = (w[1] - w[0]) * (g.sum() - .5 * (g[0] + g[-1]))
            value = reservoir_kernel(model, Omega)
            self.assertLess(abs(value - expected) / abs(expected), 1e-4, msg='Omega = %g' % Omega)

    def test_tabulated_epsilon(self):
        table = TabulatedFunction.from_csv(join(dirname(__file__), 'files', 'coupling.csv'))
        model = HuttnerBarnettModel(2., .5, 1., table, 20.)
        for Omega in (.5, 1., 1.5, 3., 5.):
            eps = effective_epsilon(model, 1., Omega)
            self.assertTrue(np.isfinite(eps), msg='Omega = %g' % Omega)
            if Omega < 4.:
                self.assertGreater(eps.imag, 0.)
        # narrow regulator: the absorptive part approaches pi h(Omega) / (2 Omega)
        kernel = reservoir_kernel(model, 1.5)
        self.assertAlmostEqual(kernel.imag / (np.pi * 1.5 ** 2 * .75 ** 2 / 3.), 1., places=4)

    def test_scaled_resonance_quadratic_in_coupling(self):
        table = TabulatedFunction.from_csv(join(dirname(__file__), 'files', 'coupling.csv'))
        doubled = TabulatedFunction(table.omega, 2. * table.values)
        base = scaled_resonance(HuttnerBarnettModel(2., .5, EPSILON_0, table, 4.)) - 4.
        shifted = scaled_resonance(HuttnerBarnettModel(2., .5, EPSILON_0, doubled, 4.)) - 4.
        self.assertAlmostEqual(shifted / base, 4., places=10)

    def test_edge_pole(self):
        with self.assertWarns(EdgePoleWarning):
            reservoir_kernel(self.coupled, np.sqrt(9. - .05))
        with warnings.catch_warnings():
            warnings.simplefilter('error')
            reservoir_kernel(self.coupled, 2.)

    def test_uncoupled_is_lorentz(self):
        for Omega in (0., .5, 1.9, 2.1, 7.):
            self.assertAlmostEqual(effective_epsilon(self.uncoupled, .8, Omega), lorentz_epsilon(2., .5, .8, Omega),
                                   places=10)
        self.assertAlmostEqual(gamma_tilde(self.uncoupled, 0.), EPSILON_0 * .5, places=25)

    def test_asymptotic(self):
        Omega = 1e3
        ratio = (effective_epsilon(self.coupled, 1., Omega) - 1.) / (-1. / Omega ** 2)
        self.assertLess(abs(ratio - 1.), 1e-2)

    def test_absorption_and_conjugate(self):
        eps = effective_epsilon(self.coupled, 1., 1.5)
        self.assertGreater(eps.imag, 0.)
        self.assertEqual(negative_frequency_epsilon(self.coupled, 1., 1.5), eps.conjugate())
        self.assertEqual(effective_epsilon(self.coupled, 0., 1.5), 1. + 0j)
        with self.assertRaises(DomainError):
            effective_epsilon(self.coupled, -1., 1.5)


class TestGaussianIdentity(unittest.TestCase):

    def test_closed_form(self):
        self.assertAlmostEqual(gaussian_closed_form([[2.]], [0.]), np.sqrt(np.pi), places=14)
        self.assertAlmostEqual(gaussian_closed_form([[1.]], [1.]), np.sqrt(2. * np.pi) * np.exp(.5), places=13)
        self.assertAlmostEqual(gaussian_closed_form(np.eye(2), [0., 0.]), 2. * np.pi, places=13)

    def test_selftest(self):
        rng = np.random.RandomState(42)
        for n in (1, 2, 3):
            for _ in range(20):
                m = .5 * rng.randn(n, n)
                A = m.dot(m.T) + np.eye(n)
                b = .5 * rng.randn(n)
                self.assertTrue(gaussian_identity_selftest(n, A, b))

    def test_invalid(self):
        with self.assertRaises(DomainError):
            gaussian_closed_form([[1., 2.], [2., 1.]], [0., 0.])
        with self.assertRaises(DomainError):
            gaussian_closed_form([[1., 0.], [1., 1.]], [0., 0.])
        with self.assertRaises(DomainError):
            gaussian_identity_selftest(4, np.eye(4), np.zeros(4))
        with self.assertRaises(DomainError):
            gaussian_identity_selftest(2, [[1.]], [0.])


if __name__ == '__main__':
    unittest.main()
