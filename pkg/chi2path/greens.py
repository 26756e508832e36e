# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.greens

.. moduleauthor:: chi2path developers

Dressed photon propagators on a one dimensional axis. The scalar Green function obeys
``[d^2/dx^2 + k0^2 n^2(x)] G(omega, x, y) = delta(x - y)`` with outgoing waves on both sides; the ``exp(-i omega t)``
factor is dropped throughout (stationary frequency-domain convention).

=========================================    ==========================================================================
Class / Function                             Characteristics
=========================================    ==========================================================================
:py:class:`WaveVectorModel`                  Dispersion relation k(omega) = omega / c * n(omega), Re n >= 0
:py:class:`PropagatorMode`                   ``analytic`` (homogeneous media) or ``numeric`` (piecewise media)
:py:class:`DressedPropagator`                Evaluator of G(omega, x, y) for a given medium, bounded per-omega cache
:py:class:`HomogeneousSolutions`             Left- and right-outgoing solutions and their Wronskian at one omega
:py:func:`analytic_1d_propagator`            Closed form exp(ik|x - y|) / (2ik) of the homogeneous medium
:py:func:`numeric_1d_propagator`             Green function of a piecewise medium from two homogeneous solutions
:py:func:`helmholtz_residual`                Finite-difference residual of a sampled Green function
:py:func:`derivative_jump`                   Jump of dG/dx across the source point
:py:func:`feynman_propagator`                Regulated Feynman propagator D_F(tau, omega) in closed form
:py:func:`sample_propagator`                 Propagator values on a grid of field positions
=========================================    ==========================================================================
"""

import logging
import warnings
from enum import Enum
from functools import lru_cache

import numpy as np

from .core import (C_LIGHT, DEFAULTS, TIME_CONVENTION, ActiveMediumWarning, DegenerateWavenumberError,
                   DiscretisationError, DomainError, ResonanceError, heaviside)
from .media import MediumProfile

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)


class PropagatorMode(Enum):
    ANALYTIC_1D = 'analytic'
    NUMERIC_1D = 'numeric'


class WaveVectorModel(object):
    """
    Dispersion relation of a homogeneous medium, ``k(omega) = omega / c * n(omega)`` with ``n = sqrt(eps)`` on the
    branch ``Re n >= 0``.

    :Example:

    >>> k = WaveVectorModel.from_index(1.5)
    >>> k(C_LIGHT)
    (1.5+0j)
    """

    def __init__(self, dispersion):
        """
        :param dispersion: {callable} angular frequency (rad/s) to complex wave number (1/m)
        """
        self.dispersion = dispersion

    @classmethod
    def from_epsilon(cls, epsilon):
        eps = epsilon if callable(epsilon) else (lambda omega: epsilon)
        return cls(lambda omega: omega / C_LIGHT * np.sqrt(complex(eps(omega))))

    @classmethod
    def from_index(cls, index):
        n = index if callable(index) else (lambda omega: index)
        return cls(lambda omega: omega / C_LIGHT * complex(n(omega)))

    @classmethod
    def vacuum(cls):
        return cls(lambda omega: complex(omega / C_LIGHT))

    @classmethod
    def from_medium(cls, medium):
        """Dispersion of a homogeneous :py:class:`chi2path.media.MediumProfile`."""
        if not medium.is_homogeneous():
            raise DomainError('the analytic propagator needs a homogeneous medium, %r is layered' % medium,
                              field='medium')
        return cls.from_epsilon(medium.bulk_epsilon)

    def __call__(self, omega):
        k = complex(self.dispersion(omega))
        if k.imag < 0.:
            warnings.warn('Im k = %g < 0 at omega = %g (active medium)' % (k.imag, omega), ActiveMediumWarning)
        return k


def _check_omega(omega):
    if not omega > 0.:
        raise DomainError('omega must be > 0, got %r' % omega, field='omega')


def analytic_1d_propagator(omega, x, y, k_model):
    """
    Green function of a homogeneous medium,
    ``1 / (2ik) * [Theta(x - y) exp(ik(x - y)) + Theta(y - x) exp(-ik(x - y))]`` with ``Theta(0) = 1/2``.

    :param omega: {float} angular frequency (rad/s)
    :param x: {float or array} field position (m)
    :param y: {float or array} source position (m)
    :param k_model: {WaveVectorModel} dispersion relation
    :return: {complex} propagator value
    :Example:

    >>> g = analytic_1d_propagator(C_LIGHT, np.pi, 0., WaveVectorModel.vacuum())
    >>> abs(g - 0.5j) < 1e-15
    True
    """
    _check_omega(omega)
    k = k_model(omega)
    if abs(k) < DEFAULTS['degenerate_k']:
        raise DegenerateWavenumberError('|k| = %g is degenerate at omega = %g' % (abs(k), omega))
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    res = (heaviside(d) * np.exp(1j * k * d) + heaviside(-d) * np.exp(-1j * k * d)) / (2j * k)
    return res if np.ndim(res) else complex(res)


def _check_grid(medium, grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0.):
        raise DomainError('grid needs >= 2 strictly increasing positions', field='grid')
    extent = medium.finite_extent()
    if extent is not None and not (grid[0] < extent[0] and grid[-1] > extent[1]):
        raise DomainError('grid [%g, %g] does not cover the medium %r with vacuum padding'
                          % (grid[0], grid[-1], medium), field='grid')
    return grid


def default_grid(medium, omega, padding=2.):
    """Uniform grid over the finite extent of ``medium`` padded by ``padding`` vacuum wavelengths, with twice the
    minimal number of points per local wavelength."""
    extent = medium.finite_extent()
    if extent is None:
        raise DomainError('medium %r has no finite extent; pass an explicit grid' % medium, field='grid')
    k_max = max([abs(omega / C_LIGHT * medium.refractive_index(omega, .5 * (a + b) if np.isfinite(a + b) else
                                                              (a if np.isfinite(a) else b)))
                 for a, b, _ in medium.regions] + [omega / C_LIGHT])
    lam_vac = 2. * np.pi * C_LIGHT / omega
    lo, hi = extent[0] - padding * lam_vac, extent[1] + padding * lam_vac
    step = 2. * np.pi / k_max / (2. * DEFAULTS['points_per_wavelength'])
    return np.linspace(lo, hi, int(np.ceil((hi - lo) / step)) + 1)


def _transfer(k, d):
    """cos(kd), sin(kd)/k and -k sin(kd) for the exact step u(x + d) of u'' + k^2 u = 0."""
    kd = k * d
    c, s = np.cos(kd), np.sin(kd)
    with np.errstate(divide='ignore', invalid='ignore'):
        s_over_k = np.where(np.abs(k) > 0., s / np.where(k == 0., 1., k), d)
    return c, s_over_k, -k * s


class HomogeneousSolutions(object):
    """
    Left-outgoing (``u_minus ~ exp(-ik x)`` left of the grid) and right-outgoing (``u_plus ~ exp(ik x)`` right of the
    grid) solutions of the homogeneous Helmholtz equation at one angular frequency. Inside each region the dielectric
    function does not depend on position, so every step between neighbouring nodes is integrated exactly; the region
    boundaries are inserted into the node set.
    """

    def __init__(self, medium, grid, omega):
        """
        :param medium: {MediumProfile} linear medium
        :param grid: {array} strictly increasing positions (m) covering the medium plus vacuum padding
        :param omega: {float} angular frequency (rad/s)
        """
        _check_omega(omega)
        grid = _check_grid(medium, grid)
        self.omega = omega
        k0 = omega / C_LIGHT
        inner = [b for b in medium.boundaries() if grid[0] < b < grid[-1]]
        self.nodes = np.union1d(grid, inner)
        h = np.diff(self.nodes)
        mids = self.nodes[:-1] + .5 * h
        self.k = k0 * np.array([medium.refractive_index(omega, m) for m in mids])

        spacing = np.diff(grid)[np.clip(np.searchsorted(grid, mids) - 1, 0, len(grid) - 2)]
        ppw = 2. * np.pi / (np.abs(self.k) * spacing)
        if np.min(ppw) < DEFAULTS['points_per_wavelength']:
            raise DiscretisationError('grid resolves only %.1f points per local wavelength at omega = %g (need %d)'
                                      % (np.min(ppw), omega, DEFAULTS['points_per_wavelength']))

        n = len(self.nodes)
        c, s, t = _transfer(self.k, h)
        self.u_minus = np.empty((n, 2), dtype=complex)
        self.u_minus[0] = 1., -1j * self.k[0]
        for j in range(n - 1):
            u, du = self.u_minus[j]
            self.u_minus[j + 1] = u * c[j] + du * s[j], u * t[j] + du * c[j]
        cb, sb, tb = _transfer(self.k, -h)
        self.u_plus = np.empty((n, 2), dtype=complex)
        self.u_plus[-1] = 1., 1j * self.k[-1]
        for j in range(n - 2, -1, -1):
            u, du = self.u_plus[j + 1]
            self.u_plus[j] = u * cb[j] + du * sb[j], u * tb[j] + du * cb[j]

        w = self.u_minus[:, 0] * self.u_plus[:, 1] - self.u_minus[:, 1] * self.u_plus[:, 0]
        scale = (np.abs(self.u_minus[0, 0] * self.u_plus[0, 1]) + np.abs(self.u_minus[0, 1] * self.u_plus[0, 0]))
        self.wronskian = w[0]
        if abs(self.wronskian) < 1e-12 * scale:
            raise ResonanceError('Wronskian vanishes at omega = %g (bound state or degenerate medium)' % omega,
                                 omega=omega)
        drift = np.max(np.abs(w - w[0])) / abs(w[0])
        if drift > DEFAULTS['wronskian_tolerance']:
            raise DiscretisationError('Wronskian drifts by %.3g along the grid at omega = %g' % (drift, omega))
        logger.debug("homogeneous solutions at omega=%g on %d nodes, Wronskian drift %.2g", omega, n, drift)

    def _evaluate(self, table, points):
        p = np.asarray(points, dtype=float)
        if np.any(p < self.nodes[0]) or np.any(p > self.nodes[-1]):
            raise DomainError('position outside the grid [%g, %g]' % (self.nodes[0], self.nodes[-1]), field='x')
        j = np.clip(np.searchsorted(self.nodes, p, side='right') - 1, 0, len(self.nodes) - 2)
        c, s, _ = _transfer(self.k[j], p - self.nodes[j])
        return table[j, 0] * c + table[j, 1] * s

    def green(self, x, y):
        """``u_minus(min(x, y)) * u_plus(max(x, y)) / W``; scalars or broadcastable arrays."""
        lo, hi = np.minimum(x, y), np.maximum(x, y)
        res = self._evaluate(self.u_minus, lo) * self._evaluate(self.u_plus, hi) / self.wronskian
        return res if np.ndim(res) else complex(res)


class DressedPropagator(object):
    """
    Evaluator of the dressed propagator ``G(omega, x, y)`` of a medium. Only the scalar diagonal component is
    evaluated; the tensor labels ``(mu, nu)`` are carried in :py:attr:`metadata`. Numeric propagators keep one
    :py:class:`HomogeneousSolutions` per angular frequency in a bounded least-recently-used cache.

    :Example:

    >>> g = DressedPropagator(MediumProfile.homogeneous(2.25), 'analytic')
    >>> abs(g(C_LIGHT, 0., 0.) - 1. / 3j) < 1e-15
    True
    """

    def __init__(self, medium, mode=PropagatorMode.ANALYTIC_1D, grid=None, scale=1., tensor=('x', 'x'),
                 cache_size=None):
        """
        :param medium: {MediumProfile} linear medium
        :param mode: {PropagatorMode or str} ``analytic`` or ``numeric``
        :param grid: {array} positions for the numeric mode; by default built per frequency from the medium extent
        :param scale: {float} overall normalisation constant multiplying every value
        :param tensor: {tuple} tensor labels of the evaluated component
        :param cache_size: {int} number of frequencies whose homogeneous solutions are kept, default from
            :py:func:`chi2path.core.read_config`
        """
        self.medium = medium
        self.mode = PropagatorMode(mode)
        self.scale = scale
        self.grid = None if grid is None else _check_grid(medium, grid)
        self.cache_size = DEFAULTS['solution_cache_size'] if cache_size is None else int(cache_size)
        self.k_model = WaveVectorModel.from_medium(medium) if self.mode is PropagatorMode.ANALYTIC_1D else None
        self.metadata = {'mode': self.mode.value, 'tensor': tuple(tensor), 'scale': scale,
                         'time_convention': TIME_CONVENTION, 'medium': medium.label}
        self._init_cache()

    def _init_cache(self):
        self._cache = lru_cache(maxsize=self.cache_size)(self._build_solutions)

    def __getstate__(self):
        state = self.__dict__.copy()
        del state['_cache']
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._init_cache()

    def _build_solutions(self, omega):
        grid = self.grid if self.grid is not None else default_grid(self.medium, omega)
        return HomogeneousSolutions(self.medium, grid, omega)

    def solutions(self, omega):
        """Cached :py:class:`HomogeneousSolutions` at ``omega`` (numeric mode); least recently used frequencies are
        dropped beyond :py:attr:`cache_size`."""
        return self._cache(float(omega))

    def clear_cache(self):
        self._cache.cache_clear()

    def __call__(self, omega, x, y):
        if self.mode is PropagatorMode.ANALYTIC_1D:
            return self.scale * analytic_1d_propagator(omega, x, y, self.k_model)
        return self.scale * self.solutions(omega).green(x, y)

    def sample(self, omega, points, y):
        """Propagator from the source ``y`` to every position in ``points`` as a complex array."""
        return np.asarray(self(omega, np.asarray(points, dtype=float), y), dtype=complex)


def numeric_1d_propagator(omega, x, y, medium, grid=None):
    """
    Outgoing-wave Green function of a piecewise medium, ``u_minus(min) * u_plus(max) / W``.

    :param omega: {float} angular frequency (rad/s)
    :param x: {float} field position (m)
    :param y: {float} source position (m)
    :param medium: {MediumProfile} linear medium
    :param grid: {array} positions covering the medium with vacuum padding, at least 20 points per local wavelength
    :return: {complex} propagator value
    """
    _check_omega(omega)
    grid = default_grid(medium, omega) if grid is None else grid
    return HomogeneousSolutions(medium, grid, omega).green(x, y)


def derivative_jump(grid, values, y):
    """
    ``dG/dx(y+) - dG/dx(y-)`` from quadratic fits through the three samples closest to ``y`` on either side.

    :param grid: {array} increasing positions (m)
    :param values: {array} sampled Green function
    :param y: {float} source position (m)
    :return: {complex} derivative jump, 1 for an exact Green function
    """
    x = np.asarray(grid, dtype=float)
    g = np.asarray(values, dtype=complex)
    left, right = x < y, x > y
    if left.sum() < 3 or right.sum() < 3:
        raise DomainError('derivative jump needs three samples on either side of y', field='grid')

    def slope(xs, gs):
        re = np.polyfit(xs - y, gs.real, 2)
        im = np.polyfit(xs - y, gs.imag, 2)
        return complex(re[1], im[1])

    return slope(x[right][:3], g[right][:3]) - slope(x[left][-3:], g[left][-3:])


def helmholtz_residual(grid, values, medium, omega, y):
    """
    Maximal residual ``|d^2G/dx^2 + k0^2 n^2(x) G|`` over the interior grid points, normalised by
    ``max |k0^2 n^2 G|``. Points within two grid steps of the source and points whose stencil straddles a medium
    boundary are skipped. The derivative jump across ``y`` is checked as well; a failure is logged.

    :param grid: {array} increasing positions (m)
    :param values: {array} sampled Green function ``G(omega, grid, y)``
    :param medium: {MediumProfile} linear medium
    :param omega: {float} angular frequency (rad/s)
    :param y: {float} source position (m)
    :return: {float} normalised residual
    :Example:

    >>> x = np.linspace(0., 1., 101)
    >>> round(helmholtz_residual(x, np.ones(101), MediumProfile.vacuum(), C_LIGHT, 0.5), 6)
    1.0
    """
    _check_omega(omega)
    x = np.asarray(grid, dtype=float)
    g = np.asarray(values, dtype=complex)
    if x.ndim != 1 or x.shape != g.shape or len(x) < 3 or np.any(np.diff(x) <= 0.):
        raise DomainError('grid and values must be matching 1D arrays of >= 3 increasing positions', field='grid')
    hm, hp = x[1:-1] - x[:-2], x[2:] - x[1:-1]
    d2 = 2. * (hm * g[2:] - (hm + hp) * g[1:-1] + hp * g[:-2]) / (hm * hp * (hm + hp))
    xi = x[1:-1]
    k0 = omega / C_LIGHT
    term = k0 ** 2 * np.array([medium.epsilon(omega, v) for v in xi]) * g[1:-1]
    mask = np.abs(xi - y) > 2. * np.max(np.diff(x))
    for b in medium.boundaries():
        mask &= ~((x[:-2] < b) & (b < x[2:]))
    if not mask.any():
        raise DomainError('no interior grid points away from the source and the medium boundaries', field='grid')
    residual = np.max(np.abs(d2 + term)[mask]) / np.max(np.abs(term)[mask])
    if np.sum(x < y) >= 3 and np.sum(x > y) >= 3:
        jump = derivative_jump(x, g, y)
        if abs(jump - 1.) > 1e-3:
            logger.warning("derivative jump across y = %g is %s, expected 1", y, jump)
    return float(residual)


def feynman_propagator(tau, omega, eta):
    """
    Regulated Feynman propagator ``D_F(tau) = int dW / 2pi exp(iW tau) / (omega^2 - W^2 - i eta)``. Closing the
    contour around the pole ``-b`` (``tau > 0``) or ``b`` (``tau < 0``), ``b = sqrt(omega^2 - i eta)`` with
    ``Im b < 0``, gives ``i / (2b) exp(-i b |tau|)``.

    :param tau: {float or array} time (s)
    :param omega: {float} angular frequency (rad/s)
    :param eta: {float} regulator (rad^2/s^2)
    :return: {complex} propagator value
    """
    _check_omega(omega)
    if not eta > 0.:
        raise DomainError('eta must be > 0', field='eta')
    b = np.sqrt(omega ** 2 - 1j * eta)
    res = 1j / (2. * b) * np.exp(-1j * b * np.abs(tau))
    return res if np.ndim(res) else complex(res)


def sample_propagator(propagator, omega, grid, y):
    """
    Sample a :py:class:`DressedPropagator` from the source ``y`` on every position of ``grid``.

    :param propagator: {DressedPropagator} evaluator
    :param omega: {float} angular frequency (rad/s)
    :param grid: {array} positions (m)
    :param y: {float} source position (m)
    :return: {numpy.ndarray} complex propagator values
    """
    return propagator.sample(omega, grid, y)
