# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.core

.. moduleauthor:: chi2path developers

Core helper functions and classes shared by the other modules: physical constants, the package exception
hierarchy, adaptive quadrature wrappers, small numerical kernels and file input/output helpers.

=====================================    ==============================================================================
Function / Class                         Characteristics
=====================================    ==============================================================================
:py:func:`read_config`                   Read the JSON file holding numerical defaults (tolerances, regulators, ...)
:py:func:`quad_real`                     Adaptive quadrature of a real integrand, raising on non-convergence
:py:func:`complex_quad`                  Adaptive quadrature of a complex integrand (real and imaginary parts)
:py:func:`integrand_scale`               Magnitude estimate ``int |f|`` used as the quadrature acceptance floor
:py:func:`sinc`                          Unnormalised cardinal sine ``sin(u)/u`` with ``sinc(0) = 1``
:py:func:`heaviside`                     Heaviside step function with ``heaviside(0) = 1/2``
:py:func:`wrap_phase`                    Wrap an angle into the interval (-pi, pi]
:py:func:`read_spectrum_csv`             Read a tabulated spectrum ``(omega, re[, im])`` from a CSV file
:py:func:`save_table`                    Atomically write a :py:class:`pandas.DataFrame` as CSV with metadata lines
:py:func:`save_json`                     Atomically write a JSON document
:py:class:`Chi2PathError`                Base class of all errors raised by the package
=====================================    ==============================================================================

All quantities are SI. The reduced Planck constant is set to one (:py:data:`HBAR`) in every cross-section formula.
"""

import json
import logging
import math
import os
import tempfile
from os.path import abspath, dirname, exists, join

import numpy as np
import pandas as pd
from scipy import constants
from scipy.integrate import quad

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)

EPSILON_0 = constants.epsilon_0
MU_0 = constants.mu_0
C_LIGHT = constants.c
HBAR = 1.0
UNITS = {'system': 'SI', 'hbar': HBAR}
TIME_CONVENTION = 'exp(-i omega t) factors dropped; stationary frequency-domain quantities'


# ----------------------------------------------------------------------------------------------------------------------
# errors and warnings

class Chi2PathError(Exception):
    """Base class of all errors raised by :mod:`chi2path`."""

    def report(self):
        """Structured description of the error, used by the command line interface.

        :return: {dict} error class name, message and every extra attribute that is set
        """
        rep = {'error': self.__class__.__name__, 'message': str(self)}
        for attr in ('field', 'key', 'line', 'column', 'omega', 'error_estimate'):
            value = getattr(self, attr, None)
            if value is not None:
                rep[attr] = value
        return rep


class ValidationError(Chi2PathError, ValueError):
    """Invalid input. ``field`` names the offending input, if known."""

    def __init__(self, message, field=None):
        super(ValidationError, self).__init__(message)
        self.field = field


class ScenarioError(ValidationError):
    """Malformed scenario document. Syntax errors carry ``line`` and ``column``."""

    def __init__(self, message, field=None, line=None, column=None):
        super(ScenarioError, self).__init__(message, field)
        self.line = line
        self.column = column


class UnknownKeyError(ScenarioError):
    """A scenario document contains a key that is not part of the schema."""

    def __init__(self, key, field=None):
        super(UnknownKeyError, self).__init__("unknown key '%s'" % key, field)
        self.key = key


class DomainError(ValidationError):
    """Argument outside the domain of an operation."""


class ContextError(ValidationError):
    """A diagram source label has no bound coordinate."""


class ArityError(ValidationError):
    """Wrong number of coordinates for a cross section."""


class ForbiddenProcessError(ValidationError):
    """The process violates energy conservation."""


class UnsupportedOrderError(ValidationError):
    """Diagram order beyond the supported range."""


class RenormalisationPolicyError(ValidationError):
    """A vacuum loop was passed to an amplitude evaluation."""


class NumericalError(Chi2PathError, ArithmeticError):
    """Numerical failure."""


class IntegrationError(NumericalError):
    """Adaptive quadrature did not converge. ``error_estimate`` is the achieved error."""

    def __init__(self, message, error_estimate=None):
        super(IntegrationError, self).__init__(message)
        self.error_estimate = error_estimate


class ResonanceError(NumericalError):
    """A denominator vanishes at the frequency ``omega``."""

    def __init__(self, message, omega=None):
        super(ResonanceError, self).__init__(message)
        self.omega = omega


class DegenerateWavenumberError(NumericalError):
    pass


class DiscretisationError(NumericalError):
    pass


class KinematicSingularityError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass


class OutOfRangeError(NumericalError):
    pass


class ValidityDomainError(NumericalError):
    pass


class TruncationError(NumericalError):
    pass


class Chi2PathWarning(UserWarning):
    pass


class GainWarning(Chi2PathWarning):
    """Negative imaginary part of a dielectric function."""


class ActiveMediumWarning(Chi2PathWarning):
    """Negative imaginary part of a wave number."""


class EdgePoleWarning(Chi2PathWarning):
    """Reservoir pole sitting on the cutoff edge of the frequency integral."""


# ----------------------------------------------------------------------------------------------------------------------
# configuration

def read_config(configfile=None):
    """
    Read the numerical defaults of the package and return a dictionary object. Without argument the file
    ``chi2path/data/defaults.json`` shipped with the package is read.

    :param configfile: {str} path to a JSON configuration file
    :return: a dictionary of configuration values
    :Example:

    >>> cfg = read_config()
    >>> cfg['quad_epsrel']
    1e-09
    """
    if configfile is None:
        configfile = join(dirname(abspath(__file__)), 'data', 'defaults.json')
    if exists(configfile):
        with open(configfile, 'r') as cfg:
            return json.load(cfg)
    else:
        raise IOError('Path to config file is wrong or file does not exist!\n%s' % configfile)


DEFAULTS = read_config()


# ----------------------------------------------------------------------------------------------------------------------
# quadrature

def _inner_points(points, a, b):
    if points is None:
        return None
    inner = sorted(set(float(p) for p in points if a < p < b))
    return inner or None


def integrand_scale(func, a, b, samples=128):
    """
    Estimate of ``int_a^b |func|`` from the midpoints of ``samples`` equal cells; non-finite samples are skipped.
    Serves as the magnitude floor of the acceptance test in :py:func:`quad_real`.

    :Example:

    >>> round(integrand_scale(np.cos, 0., np.pi), 3)
    2.0
    """
    x = a + (np.arange(samples) + .5) * (b - a) / samples
    mags = np.abs(np.array([func(v) for v in x], dtype=complex))
    mags = mags[np.isfinite(mags)]
    return float(abs(b - a) * mags.mean()) if len(mags) else 0.


def quad_real(func, a, b, points=None, epsrel=None, epsabs=None, limit=None, scale=None):
    """
    Adaptive Gauss-Kronrod quadrature of a real function on the finite interval ``[a, b]``. A scipy warning only
    fails the call when the error estimate exceeds ``quad_accept_rel * max(|value|, scale)``; cancelling integrals
    are judged against the magnitude of the integrand, not against their own (vanishing) value.

    :param func: {callable} real integrand
    :param a: {float} lower bound
    :param b: {float} upper bound
    :param points: {list} optional break points (kinks, discontinuities, sharp peaks); points outside ``(a, b)`` are
        ignored
    :param epsrel: {float} relative tolerance, default from :py:func:`read_config`
    :param epsabs: {float} absolute floor, default from :py:func:`read_config`
    :param limit: {int} maximal number of subdivisions
    :param scale: {float} magnitude of ``int |func|``, estimated by :py:func:`integrand_scale` when omitted
    :return: tuple of integral value and error estimate
    :raises IntegrationError: if the result is not finite or a flagged result has an error estimate beyond tolerance
    """
    epsrel = DEFAULTS['quad_epsrel'] if epsrel is None else epsrel
    epsabs = DEFAULTS['quad_epsabs'] if epsabs is None else epsabs
    limit = DEFAULTS['quad_limit'] if limit is None else limit
    if a == b:
        return 0., 0.
    inner = _inner_points(points, min(a, b), max(a, b))
    res = quad(func, a, b, points=inner, epsrel=epsrel, epsabs=epsabs, limit=max(limit, 2 * len(inner or []) + 50),
               full_output=1)
    value, abserr, info = res[0], res[1], res[2]
    logger.debug("quad on [%g, %g]: %d evaluations, error estimate %g", a, b, info.get('neval', -1), abserr)
    if not np.isfinite(value):
        raise IntegrationError('quadrature on [%g, %g] returned %r' % (a, b, value), error_estimate=abserr)
    if len(res) > 3:  # scipy appends a message whenever ier > 0
        message = res[3].strip().splitlines()[0]
        if scale is None:
            scale = integrand_scale(func, a, b)
        tolerable = max(epsabs, DEFAULTS['quad_accept_rel'] * max(abs(value), scale))
        if not abserr <= tolerable:
            raise IntegrationError('quadrature on [%g, %g] failed (error estimate %g > %g): %s'
                                   % (a, b, abserr, tolerable, message), error_estimate=abserr)
        logger.debug("quad warning accepted (error estimate %g <= %g): %s", abserr, tolerable, message)
    return value, abserr


def complex_quad(func, a, b, points=None, epsrel=None, epsabs=None, limit=None):
    """
    Adaptive quadrature of a complex-valued function; real and imaginary parts are integrated separately and the
    integrand values are shared between both passes. Both parts are accepted against the magnitude of the complex
    integrand.

    :param func: {callable} complex integrand
    :param a: {float} lower bound
    :param b: {float} upper bound
    :param points: {list} optional break points, see :py:func:`quad_real`
    :return: {complex} integral value
    :Example:

    >>> abs(complex_quad(lambda x: np.exp(1j * x), 0., np.pi) - 2j) < 1e-12
    True
    """
    cache = {}

    def value(x):
        try:
            return cache[x]
        except KeyError:
            v = complex(func(x))
            cache[x] = v
            return v

    scale = integrand_scale(value, a, b) if a != b else 0.
    re, _ = quad_real(lambda x: value(x).real, a, b, points, epsrel, epsabs, limit, scale)
    im, _ = quad_real(lambda x: value(x).imag, a, b, points, epsrel, epsabs, limit, scale)
    return complex(re, im)


# ----------------------------------------------------------------------------------------------------------------------
# numerical kernels

def sinc(u):
    """Unnormalised cardinal sine ``sin(u)/u`` with ``sinc(0) = 1``; accepts scalars and arrays, real or complex.

    :Example:

    >>> sinc(0.)
    1.0
    >>> round(sinc(np.pi / 2.), 10)
    0.6366197724
    """
    res = np.sinc(np.asarray(u) / np.pi)
    return res if res.ndim else res[()]


def heaviside(u):
    """Heaviside step function with the convention ``heaviside(0) = 1/2``."""
    res = np.heaviside(np.real(u), 0.5)
    return res if np.ndim(res) else float(res)


def wrap_phase(theta):
    """Wrap an angle (radians) into the interval (-pi, pi].

    :Example:

    >>> wrap_phase(-np.pi) == np.pi
    True
    """
    t = math.remainder(float(theta), 2. * math.pi)
    return math.pi if t <= -math.pi else t


# ----------------------------------------------------------------------------------------------------------------------
# file input / output

def read_spectrum_csv(filename):
    """
    Read a tabulated spectrum from a CSV file with two or three columns ``omega, re[, im]``. Lines starting with
    ``#`` are comments.

    :param filename: {str} path to the CSV file
    :return: tuple of the angular frequencies {numpy.ndarray} and the complex values {numpy.ndarray}
    :raises DomainError: for unparsable or non-numeric content, a wrong number of columns or non-increasing frequencies
    """
    if not exists(filename):
        raise IOError('Path to spectrum file is wrong or file does not exist!\n%s' % filename)
    try:
        df = pd.read_csv(filename, comment='#', header=None, skipinitialspace=True)
    except ValueError as e:  # pandas parser errors
        raise DomainError('cannot parse spectrum file %s: %s' % (filename, e), field=filename)
    if df.shape[1] not in (2, 3):
        raise DomainError('spectrum file %s must have 2 or 3 columns, found %d' % (filename, df.shape[1]),
                          field=filename)
    try:
        omega = df.iloc[:, 0].to_numpy(dtype=float)
        values = df.iloc[:, 1].to_numpy(dtype=float).astype(complex)
        if df.shape[1] == 3:
            values = values + 1j * df.iloc[:, 2].to_numpy(dtype=float)
    except ValueError:
        raise DomainError('spectrum file %s holds non-numeric entries' % filename, field=filename)
    if len(omega) < 2 or np.any(np.diff(omega) <= 0.):
        raise DomainError('frequencies in %s must be strictly increasing' % filename, field=filename)
    return omega, values


def _atomic_write(filename, write):
    filename = abspath(filename)
    directory = dirname(filename)
    if not exists(directory):
        os.makedirs(directory)
    fd, tmp = tempfile.mkstemp(prefix='.' + os.path.basename(filename) + '.', dir=directory)
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            write(f)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, filename)
    except BaseException:
        if exists(tmp):
            os.remove(tmp)
        raise
    return filename


def save_table(filename, frame, header=None):
    """
    Write a table as CSV with a fixed 17 significant digit float format. The file is written to a temporary file in
    the target directory and renamed, so no partial file survives an interruption.

    :param filename: {str} output path
    :param frame: {pandas.DataFrame} table to write
    :param header: {list} metadata lines, written with a leading ``#``
    :return: absolute path of the written file
    """
    def write(f):
        for line in header or []:
            f.write('# %s\n' % line)
        frame.to_csv(f, index=False, float_format='%.17g', lineterminator='\n')

    return _atomic_write(filename, write)


def save_json(filename, payload):
    """Atomically write ``payload`` as indented JSON with sorted keys.

    :param filename: {str} output path
    :param payload: {dict} JSON-serialisable document
    :return: absolute path of the written file
    """
    def write(f):
        f.write(json.dumps(payload, sort_keys=True, indent=2) + '\n')

    return _atomic_write(filename, write)
