# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.nonlinear

.. moduleauthor:: chi2path developers

Second-order nonlinear coupling in the undepleted pump approximation: the intense pump is a fixed classical plane
wave, which turns the three-wave vertex into the effective quadratic coupling ``lambda(x) = chi(x) A_p exp(i k_p x)``.
The module evaluates the biphoton propagator (closed form for homogeneous 1D media and by quadrature for any pair of
dressed propagators) and the phase-matching law of spontaneous parametric down-conversion.

=========================================    ==========================================================================
Class / Function                             Characteristics
=========================================    ==========================================================================
:py:class:`PumpField`                        Classical plane-wave pump (amplitude, phase, omega_p, k_p)
:py:class:`Chi2Medium`                       Scalar chi(omega, x) on a finite extent plus the linear medium
:py:class:`ThreeWaveKinematics`              Signal and idler frequencies and wave numbers with their pump
:py:func:`effective_coupling`                lambda(x) = chi(x) |A_p| exp(i phi_p) exp(i k_p x)
:py:func:`frequency_mismatch`                omega_p - omega_s - omega_i
:py:func:`is_energy_allowed`                 Energy filter on the frequency mismatch
:py:func:`phase_mismatch`                    k_p + k_s + k_i (counter) or k_p - k_s - k_i (co)
:py:func:`biphoton_1d_analytic`              Closed form Theta(x - y) G(x, y) L sinc(L dk / 2)
:py:func:`biphoton_numeric`                  Quadrature of G_s(x, z) lambda(z) G_i(z, y) over the nonlinear region
:py:func:`spdc_probability`                  L^2 sinc^2(L dk / 2)
:py:func:`phase_matching_summary`            Peak and first zeros of a phase-matching curve
=========================================    ==========================================================================
"""

import logging
from collections import namedtuple

import numpy as np

from .core import (DEFAULTS, DomainError, ForbiddenProcessError, KinematicSingularityError, complex_quad, heaviside,
                   sinc)
from .media import MediumProfile

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)

CONVENTIONS = ('counter', 'co')


class PumpField(namedtuple('PumpField', ['amplitude', 'phase', 'omega_p', 'k_p'])):
    """
    Classical pump mode ``A_p exp(i (k_p x - omega_p t))`` with ``A_p = amplitude * exp(i phase)``.

    :Example:

    >>> p = PumpField(2., 0., 1e15)
    >>> p.complex_amplitude
    (2+0j)
    """
    __slots__ = ()

    def __new__(cls, amplitude, phase, omega_p, k_p=0.):
        if not amplitude >= 0.:
            raise DomainError('pump amplitude must be >= 0', field='pump.amplitude')
        if not omega_p > 0.:
            raise DomainError('omega_p must be > 0', field='pump.omega_p')
        return super(PumpField, cls).__new__(cls, float(amplitude), float(phase), float(omega_p), complex(k_p))

    @property
    def complex_amplitude(self):
        return self.amplitude * np.exp(1j * self.phase)


class Chi2Medium(object):
    """
    Scalar second-order susceptibility on the extent ``[x_start, x_end]`` embedded in a linear medium.

    :param chi2: {float or callable} homogeneous chi (m/V) or a function of ``(omega, x)``
    :param extent: {tuple} ``(x_start, x_end)`` in m
    :param linear: {MediumProfile} linear medium, vacuum by default
    """

    def __init__(self, chi2, extent, linear=None):
        x_start, x_end = float(extent[0]), float(extent[1])
        if not (np.isfinite(x_start) and np.isfinite(x_end) and x_end > x_start):
            raise DomainError('chi2 extent must be finite with positive length', field='chi2.length')
        self.extent = (x_start, x_end)
        self.linear = MediumProfile.vacuum() if linear is None else linear
        if callable(chi2):
            self._chi = chi2
            self.constant = None
            probe = [complex(chi2(1., z)) for z in np.linspace(x_start, x_end, 17)]
            if not np.all(np.isfinite(probe)):
                raise DomainError('chi2 is not finite on its extent', field='chi2.chi')
        else:
            if not np.isfinite(chi2):
                raise DomainError('chi2 must be finite', field='chi2.chi')
            self.constant = float(chi2)
            self._chi = None

    @property
    def length(self):
        return self.extent[1] - self.extent[0]

    def chi(self, omega, x):
        """Susceptibility at ``x``; zero outside the extent."""
        if not self.extent[0] <= x <= self.extent[1]:
            return 0.
        return self.constant if self._chi is None else self._chi(omega, x)

    def __repr__(self):
        return 'Chi2Medium(%s, [%g, %g])' % ('chi' if self.constant is None else self.constant, *self.extent)


class ThreeWaveKinematics(namedtuple('ThreeWaveKinematics', ['omega_s', 'omega_i', 'k_s', 'k_i', 'pump'])):
    """
    Signal and idler modes of a three-wave process. ``k_s`` and ``k_i`` are signed: the biphoton carries the phase
    ``exp(-i (k_s x + k_i y))``.

    :Example:

    >>> kin = ThreeWaveKinematics(5e14, 5e14, -1., -1., PumpField(1., 0., 1e15, 2.))
    >>> phase_mismatch(kin)
    0j
    """
    __slots__ = ()

    def __new__(cls, omega_s, omega_i, k_s, k_i, pump):
        if not (omega_s > 0. and omega_i > 0.):
            raise DomainError('omega_s and omega_i must be > 0', field='kinematics')
        return super(ThreeWaveKinematics, cls).__new__(cls, float(omega_s), float(omega_i), complex(k_s),
                                                       complex(k_i), pump)


def effective_coupling(medium, pump, x):
    """
    Effective quadratic coupling of the undepleted pump, ``chi(x) |A_p| exp(i phi_p) exp(i k_p x)``. The
    ``exp(-i omega_p t)`` factor is accounted for by the energy filter.

    :param medium: {Chi2Medium} nonlinear medium
    :param pump: {PumpField} pump mode
    :param x: {float} position (m)
    :return: {complex} coupling, ``0`` outside the nonlinear extent
    :Example:

    >>> effective_coupling(Chi2Medium(2., (0., 1.)), PumpField(3., 0., 1.), 0.5)
    (6+0j)
    """
    chi = medium.chi(pump.omega_p, x)
    if chi == 0.:
        return 0j
    return complex(chi * pump.complex_amplitude * np.exp(1j * pump.k_p * x))


def frequency_mismatch(kin):
    """``omega_p - omega_s - omega_i`` in rad/s."""
    return kin.pump.omega_p - kin.omega_s - kin.omega_i


def is_energy_allowed(kin, tolerance=None):
    """
    Energy filter: ``|omega_p - omega_s - omega_i| <= tolerance * omega_p``.

    :param kin: {ThreeWaveKinematics} process kinematics
    :param tolerance: {float} relative tolerance, default ``energy_tolerance`` of the configuration
    :return: {bool}
    """
    tolerance = DEFAULTS['energy_tolerance'] if tolerance is None else tolerance
    return abs(frequency_mismatch(kin)) <= tolerance * kin.pump.omega_p


def phase_mismatch(kin, convention='counter'):
    """
    Wave-vector balance of the process.

    :param kin: {ThreeWaveKinematics} process kinematics
    :param convention: {str} ``counter``: ``k_p + k_s + k_i`` (signal and idler counter-propagating to the pump are
        phase matched); ``co``: ``k_p - k_s - k_i``
    :return: {complex} phase mismatch (1/m)
    """
    if convention == 'counter':
        return kin.pump.k_p + kin.k_s + kin.k_i
    elif convention == 'co':
        return kin.pump.k_p - kin.k_s - kin.k_i
    raise DomainError('unknown phase-mismatch convention %r, choose from %s' % (convention, CONVENTIONS),
                      field='convention')


def biphoton_1d_analytic(medium, kin, x, y, convention='counter', debug=False):
    """
    Closed-form biphoton propagator of a homogeneous 1D medium,
    ``Theta(x - y) * chi |A_p| exp(i phi_p) / (4 k_s k_i) * exp(-i (k_s x + k_i y)) * L sinc(L dk / 2)``.

    Terms of the full expression that violate the momentum balance are dropped; with ``debug`` their magnitude is
    logged.

    :param medium: {Chi2Medium} nonlinear medium with homogeneous chi
    :param kin: {ThreeWaveKinematics} process kinematics
    :param x: {float} signal position (m)
    :param y: {float} idler position (m)
    :param convention: {str} phase-mismatch convention, see :py:func:`phase_mismatch`
    :param debug: {bool} log the magnitude of the dropped term
    :return: {complex} biphoton propagator
    :raises ForbiddenProcessError: if the energy filter fails
    :raises KinematicSingularityError: if ``k_s k_i = 0``
    :Example:

    >>> kin = ThreeWaveKinematics(.5, .5, -1., -1., PumpField(1., 0., 1., 2.))
    >>> round(abs(biphoton_1d_analytic(Chi2Medium(0.4, (0., 1.)), kin, 0., 0.)), 12)
    0.05
    """
    if not is_energy_allowed(kin):
        raise ForbiddenProcessError('omega_p - omega_s - omega_i = %g violates energy conservation'
                                    % frequency_mismatch(kin), field='kinematics')
    if medium.constant is None:
        raise DomainError('the closed form needs a homogeneous chi', field='chi2.chi')
    kk = kin.k_s * kin.k_i
    if kk == 0.:
        raise KinematicSingularityError('k_s * k_i = 0, the closed form is singular')
    pump = kin.pump
    prefactor = medium.constant * pump.complex_amplitude / (4. * kk) * np.exp(-1j * (kin.k_s * x + kin.k_i * y))
    L = medium.length
    value = heaviside(x - y) * prefactor * L * sinc(L * phase_mismatch(kin, convention) / 2.)
    if debug:
        other = CONVENTIONS[1 - CONVENTIONS.index(convention)]
        dropped = abs(prefactor * L * sinc(L * phase_mismatch(kin, other) / 2.))
        logger.debug("dropped phase-mismatched term (%s convention): |term| = %.6g", other, dropped)
    return complex(value)


def biphoton_numeric(medium, kin, G_s, G_i, x, y):
    """
    Biphoton propagator ``int dz G_s(omega_s, x, z) lambda(z) G_i(omega_i, z, y)`` over the nonlinear extent. The
    frequency integrals of the vertex are collapsed by the energy filter, which leaves a single spatial quadrature.

    :param medium: {Chi2Medium} nonlinear medium
    :param kin: {ThreeWaveKinematics} process kinematics
    :param G_s: {DressedPropagator} signal propagator
    :param G_i: {DressedPropagator} idler propagator
    :param x: {float} signal position (m)
    :param y: {float} idler position (m)
    :return: {complex} biphoton propagator, ``0`` for an energy-forbidden process
    """
    if not is_energy_allowed(kin):
        logger.warning("energy-forbidden process (omega_p - omega_s - omega_i = %g), biphoton set to 0",
                       frequency_mismatch(kin))
        return 0j
    a, b = medium.extent
    points = [x, y] + [p for p in medium.linear.boundaries() if a < p < b]

    def integrand(z):
        lam = effective_coupling(medium, kin.pump, z)
        if lam == 0.:
            return 0j
        return G_s(kin.omega_s, x, z) * lam * G_i(kin.omega_i, z, y)

    return complex_quad(integrand, a, b, points)


def spdc_probability(L, delta_k):
    """
    Unnormalised SPDC probability ``L^2 sinc^2(L dk / 2)``; callers normalise per sweep.

    :param L: {float or array} length of the nonlinear medium (m), ``> 0``
    :param delta_k: {float or array} phase mismatch (1/m)
    :return: {float or numpy.ndarray} probability
    :Example:

    >>> spdc_probability(2., 0.) / spdc_probability(1., 0.)
    4.0
    """
    L = np.asarray(L, dtype=float)
    if np.any(L <= 0.):
        raise DomainError('L must be > 0', field='L')
    res = np.abs(L * sinc(L * np.asarray(delta_k) / 2.)) ** 2
    return res if res.ndim else float(res)


def phase_matching_summary(delta_k, probability):
    """
    Locate the peak of a phase-matching curve and the first local minimum on either side of it.

    :param delta_k: {array} increasing phase mismatch values (1/m)
    :param probability: {array} curve values at ``delta_k``
    :return: {dict} ``peak_dk``, ``peak_value``, ``first_zero_left``, ``first_zero_right``; a zero that is not
        inside the sweep is ``None``
    """
    dk = np.asarray(delta_k, dtype=float)
    p = np.asarray(probability, dtype=float)
    peak = int(np.argmax(p))
    left = right = None
    for j in range(peak - 1, 0, -1):
        if p[j] <= p[j - 1] and p[j] <= p[j + 1]:
            left = float(dk[j])
            break
    for j in range(peak + 1, len(p) - 1):
        if p[j] <= p[j - 1] and p[j] <= p[j + 1]:
            right = float(dk[j])
            break
    return {'peak_dk': float(dk[peak]), 'peak_value': float(p[peak]), 'first_zero_left': left,
            'first_zero_right': right}
