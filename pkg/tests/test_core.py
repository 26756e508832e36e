import os
import re
import tempfile
import unittest
from glob import glob
from os.path import dirname, join

import numpy as np
import pandas as pd

from chi2path.core import (ArityError, DomainError, IntegrationError, NumericalError, ScenarioError, ValidationError,
                           complex_quad, heaviside, integrand_scale, quad_real, read_config, read_spectrum_csv,
                           save_json, save_table, sinc, wrap_phase)


class TestCore(unittest.TestCase):
    files = join(dirname(__file__), 'files')
    frame = pd.DataFrame({'a': [0.1, 1. / 3.], 'b': [np.pi, -2.5e-17]})

    def test_config(self):
        cfg = read_config()
        self.assertEqual(cfg['points_per_wavelength'], 20)
        self.assertEqual(cfg['kmax_limit'], 300)
        with self.assertRaises(IOError):
            read_config(join(self.files, 'no_such_config.json'))

    def test_quad_real(self):
        value, err = quad_real(np.cos, 0., np.pi / 2.)
        self.assertAlmostEqual(value, 1., places=12)
        self.assertLess(err, 1e-9)
        self.assertEqual(quad_real(np.cos, 1., 1.), (0., 0.))

    def test_quad_cancelling(self):
        # vanishing integrals are judged against the magnitude of the integrand
        value, _ = quad_real(np.cos, 0., np.pi)
        self.assertAlmostEqual(value, 0., places=12)
        value, _ = quad_real(lambda x: x ** 3, -1., 1., scale=.5)
        self.assertAlmostEqual(value, 0., places=14)
        self.assertAlmostEqual(complex_quad(lambda x: np.exp(2j * x), 0., np.pi), 0j, places=12)
        self.assertAlmostEqual(integrand_scale(np.cos, 0., np.pi), 2., places=3)
        self.assertEqual(integrand_scale(lambda x: np.inf, 0., 1.), 0.)

    def test_quad_failure(self):
        with self.assertRaises(IntegrationError) as ctx:
            quad_real(lambda x: 1. / x, 0., 1., limit=1)
        self.assertIsNotNone(ctx.exception.error_estimate)
        self.assertIsInstance(ctx.exception, ArithmeticError)

    def test_complex_quad(self):
        self.assertAlmostEqual(complex_quad(lambda x: np.exp(1j * x), 0., np.pi), 2j, places=12)
        # break points outside the interval are ignored
        self.assertAlmostEqual(complex_quad(lambda x: x + 1j, 0., 1., points=[-1., 0.5, 3.]), .5 + 1j, places=12)

    def test_sinc(self):
        self.assertEqual(sinc(0.), 1.)
        self.assertAlmostEqual(sinc(np.pi), 0., places=15)
        self.assertAlmostEqual(sinc(np.pi / 2.), 2. / np.pi, places=15)
        np.testing.assert_allclose(sinc(np.array([-1., 1.])), np.sin(1.) * np.ones(2), rtol=1e-15)
        self.assertAlmostEqual(sinc(1j), np.sinh(1.), places=14)

    def test_heaviside(self):
        self.assertEqual(heaviside(0.), 0.5)
        self.assertEqual(heaviside(-1e-300), 0.)
        np.testing.assert_array_equal(heaviside(np.array([-1., 0., 2.])), [0., .5, 1.])

    def test_wrap_phase(self):
        self.assertEqual(wrap_phase(-np.pi), np.pi)
        self.assertAlmostEqual(wrap_phase(1.5 * np.pi), -.5 * np.pi, places=12)
        self.assertAlmostEqual(wrap_phase(2. * np.pi + 0.5), 0.5, places=12)
        self.assertEqual(wrap_phase(0.25), 0.25)

    def test_read_spectrum(self):
        omega, values = read_spectrum_csv(join(self.files, 'coupling.csv'))
        self.assertEqual(len(omega), 5)
        self.assertEqual(values[2], 1. + 0j)
        with tempfile.TemporaryDirectory() as tmp:
            bad = join(tmp, 'bad.csv')
            with open(bad, 'w') as f:
                f.write('1.0, 2.0\n0.5, 1.0\n')
            with self.assertRaises(DomainError):
                read_spectrum_csv(bad)
            wide = join(tmp, 'wide.csv')
            with open(wide, 'w') as f:
                f.write('1,2,3,4\n2,3,4,5\n')
            with self.assertRaises(DomainError):
                read_spectrum_csv(wide)
            text = join(tmp, 'text.csv')
            with open(text, 'w') as f:
                f.write('a,b\n1,2\n')
            with self.assertRaises(DomainError):
                read_spectrum_csv(text)
            ragged = join(tmp, 'ragged.csv')
            with open(ragged, 'w') as f:
                f.write('1,2\n3,4,5,6\n')
            with self.assertRaises(DomainError):
                read_spectrum_csv(ragged)
        with self.assertRaises(IOError):
            read_spectrum_csv(join(self.files, 'missing.csv'))

    def test_save_table(self):
        with tempfile.TemporaryDirectory() as tmp:
            first = save_table(join(tmp, 'out', 'a.csv'), self.frame, ['quantity: test'])
            second = save_table(join(tmp, 'b.csv'), self.frame, ['quantity: test'])
            with open(first, 'rb') as f1, open(second, 'rb') as f2:
                content = f1.read()
                self.assertEqual(content, f2.read())
            lines = content.decode().splitlines()
            self.assertEqual(lines[0], '# quantity: test')
            self.assertEqual(lines[1], 'a,b')
            self.assertEqual(lines[2], '0.10000000000000001,3.1415926535897931')
            self.assertEqual([f for f in os.listdir(tmp) if f.startswith('.')], [])

    def test_save_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = save_json(join(tmp, 'x.json'), {'b': 1, 'a': [1, 2]})
            with open(path) as f:
                self.assertTrue(f.read().startswith('{\n  "a"'))

    def test_package_data(self):
        with open(join(dirname(__file__), '..', 'setup.py')) as f:
            patterns = re.search(r"package_data=\{'chi2path': \[([^\]]*)\]", f.read()).group(1)
        package = join(dirname(__file__), '..', 'chi2path')
        for pattern in re.findall(r"'([^']+)'", patterns):
            self.assertTrue(glob(join(package, pattern)), msg=pattern)

    def test_errors(self):
        e = ScenarioError('bad', field='sweeps.0.points', line=3, column=7)
        self.assertIsInstance(e, ValidationError)
        self.assertIsInstance(e, ValueError)
        self.assertEqual(e.report(), {'error': 'ScenarioError', 'message': 'bad', 'field': 'sweeps.0.points',
                                      'line': 3, 'column': 7})
        self.assertFalse(issubclass(NumericalError, ValidationError))


if __name__ == '__main__':
    unittest.main()
