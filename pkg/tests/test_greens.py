import copy
import unittest

import numpy as np

from chi2path.core import (C_LIGHT, ActiveMediumWarning, DegenerateWavenumberError, DiscretisationError, DomainError,
                           complex_quad)
from chi2path.greens import (DressedPropagator, HomogeneousSolutions, PropagatorMode, WaveVectorModel,
                             analytic_1d_propagator, default_grid, derivative_jump, feynman_propagator,
                             helmholtz_residual, numeric_1d_propagator, sample_propagator)
from chi2path.media import MediumProfile


class TestAnalyticPropagator(unittest.TestCase):
    k_model = WaveVectorModel.from_epsilon(2.25)
    bulk = MediumProfile.homogeneous(2.25)

    def test_wave_vector(self):
        self.assertAlmostEqual(self.k_model(C_LIGHT), 1.5 + 0j, places=14)
        self.assertEqual(WaveVectorModel.vacuum()(2. * C_LIGHT), 2. + 0j)
        with self.assertWarns(ActiveMediumWarning):
            WaveVectorModel.from_epsilon(2. - .1j)(C_LIGHT)
        with self.assertRaises(DomainError):
            WaveVectorModel.from_medium(MediumProfile([(0., 1., 2.)]))

    def test_values(self):
        g0 = analytic_1d_propagator(C_LIGHT, 0., 0., self.k_model)
        self.assertAlmostEqual(g0, 1. / 3j, places=14)
        g = analytic_1d_propagator(C_LIGHT, 2., .5, self.k_model)
        self.assertAlmostEqual(g, np.exp(1.5j * 1.5) / 3j, places=14)
        self.assertAlmostEqual(g, analytic_1d_propagator(C_LIGHT, .5, 2., self.k_model), places=15)
        values = analytic_1d_propagator(C_LIGHT, np.array([2., .5]), np.array([.5, 2.]), self.k_model)
        self.assertEqual(values.shape, (2,))

    def test_invalid(self):
        with self.assertRaises(DomainError):
            analytic_1d_propagator(0., 1., 0., self.k_model)
        with self.assertRaises(DegenerateWavenumberError):
            analytic_1d_propagator(1., 1., 0., WaveVectorModel(lambda omega: 0.))

    def test_helmholtz(self):
        x = np.linspace(-3., 3., 6001)
        values = analytic_1d_propagator(C_LIGHT, x, .25, self.k_model)
        self.assertLess(helmholtz_residual(x, values, self.bulk, C_LIGHT, .25), 1e-5)
        self.assertAlmostEqual(derivative_jump(x, values, .25), 1. + 0j, places=4)

    def test_residual_flags_wrong_jump(self):
        x = np.linspace(0., 1., 101)
        with self.assertLogs('chi2path.greens', level='WARNING'):
            residual = helmholtz_residual(x, np.ones(101), MediumProfile.vacuum(), C_LIGHT, .5)
        self.assertAlmostEqual(residual, 1., places=9)
        with self.assertRaises(DomainError):
            derivative_jump(x[:4], np.ones(4), .05)


class TestNumericPropagator(unittest.TestCase):
    transparent = MediumProfile([(0., 1., 1.)], label='transparent')
    layers = MediumProfile([(-.5, 0., 2.25), (0., .5, 4.)], label='two layers')

    def test_transparent_slab_is_vacuum(self):
        grid = np.linspace(-2., 3., 501)
        for x, y in ((.3, -.5), (-1.5, 2.5), (.7, .7)):
            expected = analytic_1d_propagator(C_LIGHT, x, y, WaveVectorModel.vacuum())
            self.assertAlmostEqual(numeric_1d_propagator(C_LIGHT, x, y, self.transparent, grid), expected, places=12)

    def test_two_layers(self):
        omega, y = 2. * C_LIGHT, .25
        sol = HomogeneousSolutions(self.layers, np.linspace(-1.5, 1.5, 301), omega)
        self.assertIn(0., sol.nodes)
        x = np.linspace(-1.5, 1.5, 3001)
        values = sol.green(x, y)
        self.assertLess(helmholtz_residual(x, values, self.layers, omega, y), 1e-4)
        self.assertAlmostEqual(derivative_jump(x, values, y), 1. + 0j, places=3)
        self.assertAlmostEqual(sol.green(-1., .3), sol.green(.3, -1.), places=14)

    def test_homogeneous_matches_analytic(self):
        bulk = MediumProfile.homogeneous(2.25)
        grid = np.linspace(-3., 3., 1201)
        pts = np.linspace(-2.5, 2.5, 50)
        x, y = [v.ravel() for v in np.meshgrid(pts, pts)]
        k_model = WaveVectorModel.from_medium(bulk)
        for omega in np.linspace(1., 2., 5) * C_LIGHT:
            numeric = numeric_1d_propagator(omega, x, y, bulk, grid)
            analytic = analytic_1d_propagator(omega, x, y, k_model)
            self.assertLess(np.max(np.abs(numeric - analytic) / np.abs(analytic)), 1e-6, msg='omega = %g' % omega)
        dense = np.linspace(-3., 3., 6001)
        values = numeric_1d_propagator(2. * C_LIGHT, dense, .25, bulk, grid)
        self.assertLess(helmholtz_residual(dense, values, bulk, 2. * C_LIGHT, .25), 1e-5)

    def test_reciprocity(self):
        omega = 2. * C_LIGHT
        pts = np.linspace(-1.4, 1.4, 15)
        x, y = np.meshgrid(pts, pts)
        sol = HomogeneousSolutions(self.layers, np.linspace(-1.5, 1.5, 301), omega)
        np.testing.assert_allclose(sol.green(x, y), sol.green(y, x), rtol=1e-8)
        np.testing.assert_allclose(numeric_1d_propagator(omega, x, y, self.layers),
                                   numeric_1d_propagator(omega, y, x, self.layers), rtol=1e-8)

    def test_lossy_decay(self):
        lossy = MediumProfile.homogeneous(2.25 + .2j)
        d = np.linspace(0., 3., 301)
        analytic = np.abs(analytic_1d_propagator(C_LIGHT, d, 0., WaveVectorModel.from_medium(lossy)))
        numeric = np.abs(numeric_1d_propagator(C_LIGHT, -d, 0., lossy, np.linspace(-3., 3., 601)))
        self.assertTrue(np.all(np.diff(analytic) < 0.))
        self.assertTrue(np.all(np.diff(numeric) < 0.))
        np.testing.assert_allclose(numeric, analytic, rtol=1e-8)

    def test_outgoing_outside(self):
        omega = 2. * C_LIGHT
        sol = HomogeneousSolutions(self.layers, np.linspace(-1.5, 1.5, 301), omega)
        right = sol.green(np.array([1., 1.2]), 0.)
        self.assertAlmostEqual(right[1] / right[0], np.exp(2j * .2), places=10)
        left = sol.green(np.array([-1.2, -1.]), 0.)
        self.assertAlmostEqual(left[0] / left[1], np.exp(2j * .2), places=10)

    def test_grid_checks(self):
        with self.assertRaises(DiscretisationError):
            HomogeneousSolutions(self.transparent, np.linspace(-2., 3., 11), C_LIGHT)
        with self.assertRaises(DomainError):
            HomogeneousSolutions(self.transparent, np.linspace(.5, 3., 500), C_LIGHT)
        sol = HomogeneousSolutions(self.transparent, np.linspace(-2., 3., 501), C_LIGHT)
        with self.assertRaises(DomainError):
            sol.green(5., 0.)

    def test_default_grid(self):
        slab = MediumProfile([(0., 1., 2.25)])
        grid = default_grid(slab, C_LIGHT)
        self.assertAlmostEqual(grid[0], -4. * np.pi, places=12)
        self.assertAlmostEqual(grid[-1], 1. + 4. * np.pi, places=12)
        self.assertLessEqual(np.max(np.diff(grid)), 2. * np.pi / 1.5 / 40. + 1e-12)
        with self.assertRaises(DomainError):
            default_grid(MediumProfile.homogeneous(2.), C_LIGHT)


class TestDressedPropagator(unittest.TestCase):

    def test_analytic_mode(self):
        prop = DressedPropagator(MediumProfile.homogeneous(2.25), 'analytic', scale=2.)
        self.assertIs(prop.mode, PropagatorMode.ANALYTIC_1D)
        self.assertAlmostEqual(prop(C_LIGHT, 0., 0.), 2. / 3j, places=14)
        self.assertEqual(prop.metadata['tensor'], ('x', 'x'))
        self.assertEqual(prop.metadata['mode'], 'analytic')
        with self.assertRaises(DomainError):
            DressedPropagator(MediumProfile([(0., 1., 2.)]), PropagatorMode.ANALYTIC_1D)
        with self.assertRaises(ValueError):
            DressedPropagator(MediumProfile.vacuum(), 'spectral')

    def test_numeric_mode(self):
        medium = MediumProfile([(0., 1., 2.25)])
        prop = DressedPropagator(medium, 'numeric')
        sol = prop.solutions(C_LIGHT)
        self.assertIs(prop.solutions(C_LIGHT), sol)
        self.assertEqual(prop(C_LIGHT, .2, .6), sol.green(.2, .6))
        points = np.linspace(0., 1., 5)
        np.testing.assert_array_equal(sample_propagator(prop, C_LIGHT, points, .6), sol.green(points, .6))
        clone = copy.copy(prop)
        self.assertEqual(clone._cache.cache_info().currsize, 0)
        self.assertIsNot(clone._cache, prop._cache)
        self.assertEqual(clone(C_LIGHT, .2, .6), prop(C_LIGHT, .2, .6))

    def test_cache_is_bounded(self):
        medium = MediumProfile([(0., 1., 2.25)])
        self.assertEqual(DressedPropagator(medium, 'numeric').cache_size, 64)
        prop = DressedPropagator(medium, 'numeric', cache_size=2)
        first = prop.solutions(C_LIGHT)
        prop.solutions(1.5 * C_LIGHT)
        prop.solutions(2. * C_LIGHT)
        self.assertEqual(prop._cache.cache_info().currsize, 2)
        self.assertIsNot(prop.solutions(C_LIGHT), first)
        prop.clear_cache()
        self.assertEqual(prop._cache.cache_info().currsize, 0)

    def test_numeric_needs_extent(self):
        prop = DressedPropagator(MediumProfile.homogeneous(2.25), 'numeric')
        with self.assertRaises(DomainError):
            prop(C_LIGHT, 0., 0.)


class TestFeynmanPropagator(unittest.TestCase):

    def test_against_frequency_integral(self):
        omega, eta, tau = 1., .05, 1.
        expected = complex_quad(lambda w: np.cos(w * tau) / (omega ** 2 - w ** 2 - 1j * eta), 0., 200.,
                                points=[omega]) / np.pi
        value = feynman_propagator(tau, omega, eta)
        self.assertLess(abs(value - expected) / abs(expected), 1e-4)
        self.assertEqual(feynman_propagator(-tau, omega, eta), value)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            feynman_propagator(1., 1., 0.)
        with self.assertRaises(DomainError):
            feynman_propagator(1., -1., .1)


if __name__ == '__main__':
    unittest.main()
