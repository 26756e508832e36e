# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.media

.. moduleauthor:: chi2path developers

This module houses the description of linear media on a one dimensional axis and the microscopic oscillator plus
reservoir model that generates an effective dielectric function.

=========================================    ==========================================================================
Class / Function                             Characteristics
=========================================    ==========================================================================
:py:class:`MediumProfile`                    Ordered, non-overlapping regions with dielectric functions eps(omega)
:py:class:`HuttnerBarnettModel`              Oscillator (omega0, beta) coupled to a reservoir continuum (rho, f(omega))
:py:class:`TabulatedFunction`                Linearly interpolated tabulated function, zero outside its table
:py:func:`scaled_resonance`                  Resonance frequency squared shifted by the reservoir coupling
:py:func:`reservoir_kernel`                  Frequency-domain reservoir Green function with a -i eta pole shift
:py:func:`gamma_tilde`                       Frequency-domain response of the dressed polarisation oscillator
:py:func:`effective_epsilon`                 Positive frequency effective dielectric function eps+(Omega)
:py:func:`negative_frequency_epsilon`        Negative frequency part eps-(Omega) = conj(eps+(Omega))
:py:func:`lorentz_epsilon`                   Closed form of the lossless Lorentz dielectric function
:py:func:`gaussian_closed_form`              Closed form of a multidimensional Gaussian integral
:py:func:`gaussian_identity_selftest`        Quadrature check of the Gaussian integral identity
=========================================    ==========================================================================
"""

import bisect
import logging
import warnings
from collections import namedtuple
from functools import lru_cache

import numpy as np

from .core import (EPSILON_0, DEFAULTS, DomainError, EdgePoleWarning, GainWarning, ResonanceError, complex_quad,
                   quad_real, read_spectrum_csv)

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)


class TabulatedFunction(object):
    """Tabulated function of angular frequency, linearly interpolated between the nodes and zero outside the table.

    :Example:

    >>> f = TabulatedFunction([1., 2., 3.], [0., 1., 0.])
    >>> f(1.5)
    0.5
    >>> f(10.)
    0.0
    """

    def __init__(self, omega, values):
        """
        :param omega: {array} strictly increasing angular frequencies (rad/s)
        :param values: {array} real or complex values at ``omega``
        """
        omega = np.asarray(omega, dtype=float)
        values = np.asarray(values)
        if omega.ndim != 1 or omega.shape != values.shape or len(omega) < 2:
            raise DomainError('tabulated function needs two 1D arrays of equal length >= 2')
        if np.any(np.diff(omega) <= 0.):
            raise DomainError('tabulated frequencies must be strictly increasing')
        self.omega = omega
        self.values = values
        self.omega.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def from_csv(cls, filename, complex_values=False):
        """Read a table from a two/three-column CSV file (see :py:func:`chi2path.core.read_spectrum_csv`).

        :param filename: {str} path of the CSV file
        :param complex_values: {bool} keep the imaginary column; otherwise only the real column is used
        """
        omega, values = read_spectrum_csv(filename)
        return cls(omega, values if complex_values else values.real)

    @property
    def nodes(self):
        return self.omega

    def __call__(self, omega):
        if np.iscomplexobj(self.values):
            res = (np.interp(omega, self.omega, self.values.real, left=0., right=0.) +
                   1j * np.interp(omega, self.omega, self.values.imag, left=0., right=0.))
        else:
            res = np.interp(omega, self.omega, self.values, left=0., right=0.)
        return res if np.ndim(res) else res[()]


def _as_callable(value):
    if callable(value):
        return value
    const = value

    def constant(*args):
        return const
    constant.constant = const
    return constant


class MediumProfile(object):
    """
    Linear medium on a one dimensional axis. Every region is a half-open interval ``[x_start, x_end)`` carrying a
    dielectric function of angular frequency; the axis outside all regions is vacuum (eps = 1). The geometry factor
    ``g(x)`` is the coupling scale inside the regions and zero outside.
    """

    def __init__(self, regions, g=1., label='medium'):
        """
        :param regions: {list} tuples ``(x_start, x_end, epsilon)`` with positions in m; ``epsilon`` is a number or a
            function of the angular frequency; ``x_start`` may be ``-inf`` and ``x_end`` may be ``inf``
        :param g: {float or callable} geometry factor inside the regions
        :param label: {str} name of the medium
        :return: attributes :py:attr:`regions`, :py:attr:`label`
        :Example:

        >>> slab = MediumProfile([(0., 1e-3, 2.25)], label='glass')
        >>> slab.epsilon(1e15, 5e-4)
        (2.25+0j)
        >>> slab.epsilon(1e15, 2e-3)
        (1+0j)
        """
        regions = [(float(a), float(b), _as_callable(eps)) for a, b, eps in regions]
        for a, b, _ in regions:
            if not a < b:
                raise DomainError('region [%g, %g) has x_start >= x_end' % (a, b), field='regions')
        for (a1, b1, _), (a2, b2, _) in zip(regions[:-1], regions[1:]):
            if b1 > a2:
                raise DomainError('regions [%g, %g) and [%g, %g) overlap or are not ordered' % (a1, b1, a2, b2),
                                  field='regions')
        self.regions = tuple(regions)
        self.label = label
        self._g = _as_callable(g)
        self._starts = [r[0] for r in self.regions]

    @classmethod
    def vacuum(cls):
        return cls([], g=0., label='vacuum')

    @classmethod
    def homogeneous(cls, epsilon, label='bulk'):
        """A single region filling the whole axis."""
        return cls([(-np.inf, np.inf, epsilon)], label=label)

    @classmethod
    def from_model(cls, model, x_start, x_end, g_value=1., label='oscillator medium'):
        """Single-region medium whose dielectric function is :py:func:`effective_epsilon` of ``model``.

        :param model: {HuttnerBarnettModel} microscopic model
        :param x_start: {float} start of the region (m)
        :param x_end: {float} end of the region (m)
        :param g_value: {float} geometry factor inside the region
        """
        def epsilon(omega):
            return effective_epsilon(model, g_value, abs(omega)) if omega >= 0. else \
                negative_frequency_epsilon(model, g_value, -omega)
        return cls([(x_start, x_end, epsilon)], g=g_value, label=label)

    def _region(self, x):
        i = bisect.bisect_right(self._starts, x) - 1
        if i >= 0 and x < self.regions[i][1]:
            return self.regions[i]
        return None

    def epsilon(self, omega, x):
        """Dielectric function at angular frequency ``omega`` and position ``x``; warns on gain (Im eps < 0)."""
        region = self._region(x)
        if region is None:
            return 1. + 0j
        eps = complex(region[2](omega))
        if eps.imag < 0. and omega > 0.:
            warnings.warn('Im eps = %g < 0 at omega = %g in %s (gain)' % (eps.imag, omega, self.label), GainWarning)
        return eps

    def refractive_index(self, omega, x):
        """n = sqrt(eps) on the branch Re n >= 0."""
        return complex(np.sqrt(self.epsilon(omega, x)))

    def g(self, x):
        region = self._region(x)
        return 0. if region is None else float(self._g(x))

    def boundaries(self):
        """Sorted finite region boundaries (m)."""
        return sorted(set(v for r in self.regions for v in r[:2] if np.isfinite(v)))

    def finite_extent(self):
        """Smallest interval holding all finite boundaries, or ``None``."""
        b = self.boundaries()
        return (b[0], b[-1]) if b else None

    def is_homogeneous(self):
        """True for vacuum and for a single region filling the whole axis."""
        if not self.regions:
            return True
        return len(self.regions) == 1 and self.regions[0][0] == -np.inf and self.regions[0][1] == np.inf

    def bulk_epsilon(self, omega):
        """Dielectric function of a homogeneous medium."""
        if not self.is_homogeneous():
            raise DomainError('medium %s is not homogeneous' % self.label, field='medium')
        return self.epsilon(omega, 0.)

    def __repr__(self):
        return 'MediumProfile(%s, %d regions)' % (self.label, len(self.regions))


class HuttnerBarnettModel(namedtuple('HuttnerBarnettModel', ['omega0', 'beta', 'rho', 'coupling_f', 'omega_cutoff',
                                                             'eta'])):
    """
    Microscopic polarisation oscillator (resonance ``omega0``, static polarisability ``beta``) coupled to a continuum
    of reservoir oscillators with mass density ``rho`` and spectral coupling ``coupling_f``. The values are spatially
    constant; piecewise media use one model per region.

    :Example:

    >>> m = HuttnerBarnettModel(1e15, 1.5, 1., 0., 3e15)
    >>> m.eta == 1e-6 * m.omega0 ** 2
    True
    """
    __slots__ = ()

    def __new__(cls, omega0, beta, rho, coupling_f, omega_cutoff, eta=None):
        """
        :param omega0: {float} resonance angular frequency (rad/s)
        :param beta: {float} static polarisability
        :param rho: {float} reservoir mass density per unit frequency
        :param coupling_f: {callable, float or TabulatedFunction} spectral coupling f(omega)
        :param omega_cutoff: {float} upper limit of the reservoir integrals (rad/s)
        :param eta: {float} regulator of the omega^2 - Omega^2 poles (rad^2/s^2), default ``eta_scale * omega0**2``
        """
        if eta is None:
            eta = DEFAULTS['eta_scale'] * float(omega0) ** 2
        for name, value in (('omega0', omega0), ('beta', beta), ('rho', rho), ('eta', eta)):
            if not value > 0.:
                raise DomainError('%s must be > 0, got %r' % (name, value), field=name)
        if not omega_cutoff > omega0:
            raise DomainError('omega_cutoff must exceed omega0', field='omega_cutoff')
        coupling_f = _as_callable(coupling_f)
        probe = np.array([coupling_f(w) for w in np.linspace(0., omega_cutoff, 65)], dtype=complex)
        if not np.all(np.isfinite(probe)):
            raise DomainError('coupling_f is not finite on [0, omega_cutoff]', field='coupling_f')
        return super(HuttnerBarnettModel, cls).__new__(cls, float(omega0), float(beta), float(rho), coupling_f,
                                                       float(omega_cutoff), float(eta))

    def breakpoints(self):
        nodes = getattr(self.coupling_f, 'nodes', None)
        if nodes is None or len(nodes) > 1000:
            return []
        return [w for w in nodes if 0. < w < self.omega_cutoff]

    def is_uncoupled(self):
        return getattr(self.coupling_f, 'constant', None) == 0.


@lru_cache(maxsize=256)
def scaled_resonance(model):
    """
    Resonance frequency squared dressed by the reservoir, ``omega0**2 + int_0^cutoff |v(w)|**2 / rho**2 dw`` with
    ``v(w) = f(w) * sqrt(eps0 * omega0**2 * beta * rho)``.

    :param model: {HuttnerBarnettModel} microscopic model
    :return: {float} scaled resonance (rad/s)^2
    :raises IntegrationError: if the quadrature does not converge
    :Example:

    >>> scaled_resonance(HuttnerBarnettModel(2., 1., 1., 0., 5.))
    4.0
    """
    if model.is_uncoupled():
        return model.omega0 ** 2
    weight, _ = quad_real(lambda w: abs(model.coupling_f(w)) ** 2, 0., model.omega_cutoff, model.breakpoints())
    return model.omega0 ** 2 + weight * EPSILON_0 * model.omega0 ** 2 * model.beta / model.rho


def _check_frequency(Omega):
    if not Omega >= 0.:
        raise DomainError('Omega must be >= 0, got %r' % Omega, field='Omega')


def reservoir_kernel(model, Omega):
    """
    Reservoir kernel ``int_0^cutoff w**2 |f(w)|**2 / (w**2 - Omega**2 - i eta) dw``.

    Below the cutoff the pole is split off analytically: with ``a = sqrt(Omega**2 + i eta)`` the integrand is written
    as ``h(w) / (2a) * [1/(w - a) - 1/(w + a)]``. On either side of ``Omega`` the tangent of ``h`` (one-sided slope,
    so a table node at ``Omega`` is allowed) is subtracted from the singular part and integrated in closed form; the
    remainder vanishes quadratically at the pole and carries no feature of width ``eta``.

    :param model: {HuttnerBarnettModel} microscopic model
    :param Omega: {float} angular frequency (rad/s), ``>= 0``
    :return: {complex} kernel value
    """
    _check_frequency(Omega)
    if model.is_uncoupled():
        return 0j
    W, eta = model.omega_cutoff, model.eta
    if abs(Omega ** 2 - W ** 2) <= DEFAULTS['edge_pole_factor'] * eta:
        warnings.warn('Omega = %g lies on the cutoff edge %g; the pole contribution is truncated' % (Omega, W),
                      EdgePoleWarning)

    def h(w):
        return w * w * abs(model.coupling_f(w)) ** 2

    points = model.breakpoints()
    if Omega ** 2 <= eta or Omega >= W:
        return complex_quad(lambda w: h(w) / (w * w - Omega ** 2 - 1j * eta), 0., W, points + [Omega])
    a = np.sqrt(Omega ** 2 + 1j * eta)
    h0 = h(Omega)
    step = 1e-4 * min(Omega, W - Omega)

    def side(lo, hi, sign):
        # second order one-sided slope of h at Omega, towards Omega - sign * step
        h1 = sign * (3. * h0 - 4. * h(Omega - sign * step) + h(Omega - 2. * sign * step)) / (2. * step)
        log = np.log(hi - a) - np.log(lo - a)
        tangent = h0 * log + h1 * ((hi - lo) + (a - Omega) * log)
        return tangent + complex_quad(lambda w: (h(w) - h0 - h1 * (w - Omega)) / (w - a), lo, hi, points)

    singular = side(0., Omega, 1.) + side(Omega, W, -1.)
    regular = complex_quad(lambda w: h(w) / (w + a), 0., W, points)
    return complex((singular - regular) / (2. * a))


def gamma_tilde(model, Omega):
    """
    Frequency-domain response of the polarisation oscillator dressed by the reservoir,
    ``[(w0t**2 - Omega**2) / (eps0 omega0**2 beta) - G(Omega) / rho]**-1``.

    :param model: {HuttnerBarnettModel} microscopic model
    :param Omega: {float} angular frequency (rad/s)
    :return: {complex} response
    :raises ResonanceError: if the denominator vanishes to 1e-14 of its scale
    :Example:

    >>> m = HuttnerBarnettModel(1e15, 2., 1., 0., 4e15)
    >>> abs(gamma_tilde(m, 0.) - EPSILON_0 * 2.) < 1e-25
    True
    """
    _check_frequency(Omega)
    stiffness = EPSILON_0 * model.omega0 ** 2 * model.beta
    w0t2 = scaled_resonance(model)
    kernel = reservoir_kernel(model, Omega)
    denominator = (w0t2 - Omega ** 2) / stiffness - kernel / model.rho
    scale = (abs(w0t2) + Omega ** 2) / stiffness + abs(kernel) / model.rho
    if abs(denominator) < DEFAULTS['resonance_floor'] * scale:
        raise ResonanceError('oscillator response is singular at Omega = %g' % Omega, omega=Omega)
    return 1. / denominator


def effective_epsilon(model, g_value, Omega):
    """
    Positive frequency effective dielectric function ``eps+(Omega) = 1 + g / eps0 * gamma_tilde(Omega)``.

    :param model: {HuttnerBarnettModel} microscopic model
    :param g_value: {float} geometry factor, ``0`` in vacuum
    :param Omega: {float} angular frequency (rad/s)
    :return: {complex} dielectric function
    """
    _check_frequency(Omega)
    if g_value < 0.:
        raise DomainError('g_value must be >= 0', field='g_value')
    if g_value == 0.:
        return 1. + 0j
    return 1. + g_value / EPSILON_0 * gamma_tilde(model, Omega)


def negative_frequency_epsilon(model, g_value, Omega):
    """Negative frequency part ``eps-(Omega) = conj(eps+(Omega))``."""
    return effective_epsilon(model, g_value, Omega).conjugate()


def lorentz_epsilon(omega0, beta, g_value, Omega):
    """Lossless Lorentz dielectric function ``1 + g beta omega0**2 / (omega0**2 - Omega**2)``.

    :Example:

    >>> lorentz_epsilon(1., 0.5, 1., 0.)
    1.5
    """
    return 1. + g_value * beta * omega0 ** 2 / (omega0 ** 2 - np.asarray(Omega) ** 2)


def _check_spd(matrix, shift):
    A = np.atleast_2d(np.asarray(matrix, dtype=float))
    b = np.atleast_1d(np.asarray(shift, dtype=float))
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise DomainError('matrix must be n x n and shift of length n', field='matrix')
    if not np.allclose(A, A.T, rtol=1e-12, atol=0.):
        raise DomainError('matrix is not symmetric', field='matrix')
    try:
        np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        raise DomainError('matrix is not positive definite', field='matrix')
    return A, b


def gaussian_closed_form(matrix, shift):
    """
    Closed form of ``int exp(-1/2 (x, A x) - (b, x)) d^n x = sqrt((2 pi)**n / det A) * exp(1/2 (b, A^-1 b))``.

    :param matrix: {array} symmetric positive definite matrix ``A``
    :param shift: {array} vector ``b``
    :return: {float} integral value
    """
    A, b = _check_spd(matrix, shift)
    n = len(b)
    return float(np.sqrt((2. * np.pi) ** n / np.linalg.det(A)) * np.exp(.5 * b.dot(np.linalg.solve(A, b))))


def gaussian_identity_selftest(dimension, matrix, shift, tolerance=1e-6, nodes=96):
    """
    Integrate ``exp(-1/2 (x, A x) - (b, x))`` with a tensor Gauss-Legendre rule on the box of +-10 standard
    deviations around the maximum and compare with :py:func:`gaussian_closed_form`.

    :param dimension: {int} 1, 2 or 3
    :param matrix: {array} symmetric positive definite matrix
    :param shift: {array} shift vector
    :param tolerance: {float} relative tolerance
    :param nodes: {int} quadrature nodes per axis
    :return: {bool} whether quadrature and closed form agree
    :raises DomainError: for non positive definite matrices or unsupported dimensions
    :Example:

    >>> gaussian_identity_selftest(1, [[2.]], [0.])
    True
    """
    if dimension not in (1, 2, 3):
        raise DomainError('dimension must be 1, 2 or 3', field='dimension')
    A, b = _check_spd(matrix, shift)
    if len(b) != dimension:
        raise DomainError('matrix size does not match dimension %d' % dimension, field='matrix')
    cov = np.linalg.inv(A)
    center = -cov.dot(b)
    sigma = np.sqrt(np.diag(cov))
    # slices through a correlated Gaussian are narrower than its marginals by sqrt(A_ii * cov_ii)
    narrowing = np.max(np.diag(A) * np.diag(cov))
    nodes = int(min(max(nodes, np.ceil(45. * np.sqrt(narrowing))), 160))
    t, w = np.polynomial.legendre.leggauss(nodes)
    axes = [center[i] + 10. * sigma[i] * t for i in range(dimension)]
    weights = [10. * sigma[i] * w for i in range(dimension)]
    grid = np.stack([g.ravel() for g in np.meshgrid(*axes, indexing='ij')], axis=-1)
    weight = np.ones(1)
    for wi in weights:
        weight = np.multiply.outer(weight, wi)
    peak = .5 * b.dot(cov.dot(b))
    exponent = -.5 * np.einsum('ki,ij,kj->k', grid, A, grid) - grid.dot(b) - peak
    lhs = np.sum(weight.ravel() * np.exp(exponent))
    rhs = np.sqrt((2. * np.pi) ** dimension / np.linalg.det(A))
    rel = abs(lhs - rhs) / rhs
    logger.debug("gaussian self-test n=%d: relative deviation %.3g", dimension, rel)
    return bool(rel < tolerance)
