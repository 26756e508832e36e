# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.squeezing

.. moduleauthor:: chi2path developers

Photon-number states produced by cascaded down-conversion and their squeezing parameter. Cascading pair creation
builds ``sum_k psi_k sigma^k |2k>``; reading the squeezed vacuum expansion as an identity fixes the weights
``psi_k`` to ``sqrt(sech s) sqrt((2k)!) / k! (-1/2)^k`` and gives ``tanh s = |sigma|``, ``theta = arg sigma``.

=========================================    ==========================================================================
Class / Function                             Characteristics
=========================================    ==========================================================================
:py:class:`PhotonNumberState`                Truncated single-mode state in the photon-number basis
:py:class:`SqueezingParameter`               xi = s exp(i theta), s >= 0, theta in (-pi, pi]
:py:func:`squeezed_vacuum_coefficients`      Squeezed vacuum expansion up to a photon number kmax
:py:func:`cascaded_state`                    State of the cascaded pair-creation chain for an amplitude sigma
:py:func:`squeezing_from_sigma`              s = atanh |sigma|, theta = arg sigma
:py:func:`squeezing_1d_closed_form`          s and theta of a phase-matched homogeneous 1D medium
:py:func:`cascade_order_sigma`               Amplitude sigma^(N/2) of the N-photon cascade
:py:func:`squeezing_sweep`                   s(L), theta(L) and validity margin over a length grid
=========================================    ==========================================================================
"""

import logging
from collections import namedtuple

import numpy as np
import pandas as pd
from scipy.special import gammaln

from .core import (DEFAULTS, DivergenceError, DomainError, KinematicSingularityError, OutOfRangeError, TruncationError,
                   ValidityDomainError, wrap_phase)
from .nonlinear import phase_mismatch

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)


class SqueezingParameter(namedtuple('SqueezingParameter', ['s', 'theta'])):
    """
    Squeezing parameter ``xi = s exp(i theta)``; ``theta`` is wrapped into (-pi, pi].

    :Example:

    >>> p = SqueezingParameter(0.5, 0.)
    >>> abs(p.mean_photon_number - np.sinh(0.5) ** 2) < 1e-15
    True
    """
    __slots__ = ()

    def __new__(cls, s, theta=0.):
        if not (np.isfinite(s) and s >= 0.):
            raise DomainError('s must be finite and >= 0, got %r' % s, field='s')
        return super(SqueezingParameter, cls).__new__(cls, float(s), wrap_phase(theta))

    @property
    def xi(self):
        return self.s * np.exp(1j * self.theta)

    @property
    def mean_photon_number(self):
        return float(np.sinh(self.s) ** 2)


class PhotonNumberState(object):
    """
    Single-mode state truncated at photon number ``kmax``.

    :param coefficients: {dict or array} photon number to complex amplitude
    :param kmax: {int} truncation order
    """

    def __init__(self, coefficients, kmax=None):
        if isinstance(coefficients, dict):
            kmax = max(coefficients) if kmax is None else kmax
            vec = np.zeros(kmax + 1, dtype=complex)
            for k, c in coefficients.items():
                if not 0 <= k <= kmax:
                    raise DomainError('photon number %r outside 0..%d' % (k, kmax), field='coefficients')
                vec[k] = c
        else:
            vec = np.array(coefficients, dtype=complex)
            kmax = len(vec) - 1 if kmax is None else kmax
            vec = np.concatenate([vec, np.zeros(max(0, kmax + 1 - len(vec)), dtype=complex)])[:kmax + 1]
        self.kmax = int(kmax)
        self._vec = vec
        self._vec.setflags(write=False)

    @property
    def coefficients(self):
        return dict((k, complex(c)) for k, c in enumerate(self._vec) if c != 0.)

    def __getitem__(self, k):
        return complex(self._vec[k]) if 0 <= k <= self.kmax else 0j

    def vector(self):
        return self._vec.copy()

    def norm(self):
        return float(np.linalg.norm(self._vec))

    def normalised(self):
        n = self.norm()
        if n == 0.:
            raise DomainError('cannot normalise the zero vector', field='coefficients')
        return PhotonNumberState(self._vec / n, self.kmax)

    def probabilities(self):
        return np.abs(self._vec) ** 2

    def mean_photon_number(self):
        p = self.probabilities()
        return float(np.dot(np.arange(self.kmax + 1), p) / p.sum())

    def __repr__(self):
        return 'PhotonNumberState(kmax=%d, norm=%.12g)' % (self.kmax, self.norm())


def _pair_log_weight(m):
    """log of sqrt((2m)!) / m!"""
    return .5 * gammaln(2. * m + 1.) - gammaln(m + 1.)


def _even_state(log_abs, phase, kmax):
    log_abs = log_abs - np.max(log_abs)
    c = np.exp(log_abs + 1j * phase)
    c /= np.linalg.norm(c)
    vec = np.zeros(kmax + 1, dtype=complex)
    vec[0::2] = c
    return PhotonNumberState(vec, kmax)


def _check_truncation(kmax, name):
    if kmax > DEFAULTS['kmax_limit']:
        raise TruncationError('%s = %d exceeds the supported truncation %d' % (name, kmax, DEFAULTS['kmax_limit']))


def squeezed_vacuum_coefficients(param, kmax):
    """
    Squeezed vacuum ``c_2m ~ sqrt(sech s) sqrt((2m)!) / m! (-1/2 exp(i theta) tanh s)^m`` for ``2m <= kmax``,
    normalised on the truncation window. Weights are accumulated in the log domain.

    :param param: {SqueezingParameter} squeezing parameter
    :param kmax: {int} even truncation order >= 2
    :return: {PhotonNumberState} normalised state
    :raises TruncationError: for ``kmax`` beyond the supported limit
    :Example:

    >>> st = squeezed_vacuum_coefficients(SqueezingParameter(0., 0.), 4)
    >>> st[0], st[2]
    ((1+0j), 0j)
    """
    if kmax < 2 or kmax % 2:
        raise DomainError('kmax must be even and >= 2, got %r' % kmax, field='kmax')
    _check_truncation(kmax, 'kmax')
    if param.s == 0.:
        return PhotonNumberState({0: 1.}, kmax)
    m = np.arange(kmax // 2 + 1)
    log_abs = -.5 * np.log(np.cosh(param.s)) + _pair_log_weight(m) + m * np.log(.5 * np.tanh(param.s))
    return _even_state(log_abs, m * (param.theta + np.pi), kmax)


def cascaded_state(sigma, N):
    """
    Normalised state ``sum_{2m <= N} psi_m sigma^m |2m>`` of ``N / 2`` cascaded pair creations.

    :param sigma: {complex} pair-creation amplitude, ``|sigma| < 1``
    :param N: {int} even maximal photon number
    :return: {PhotonNumberState} normalised state, zero on odd photon numbers
    :raises DivergenceError: for ``|sigma| >= 1``
    """
    if abs(sigma) >= 1.:
        raise DivergenceError('the cascade diverges for |sigma| = %g >= 1' % abs(sigma))
    if N < 0 or N % 2:
        raise DomainError('N must be even and >= 0, got %r' % N, field='N')
    _check_truncation(N, 'N')
    if sigma == 0. or N == 0:
        return PhotonNumberState({0: 1.}, N)
    m = np.arange(N // 2 + 1)
    log_abs = _pair_log_weight(m) + m * np.log(.5 * abs(sigma))
    return _even_state(log_abs, m * (np.angle(sigma) + np.pi), N)


def squeezing_from_sigma(sigma):
    """
    Squeezing parameter of the cascade amplitude, ``tanh s = |sigma|`` and ``theta = arg sigma``.

    :param sigma: {complex} amplitude (hbar = 1)
    :return: {SqueezingParameter}
    :raises OutOfRangeError: for ``|sigma| >= 1``
    :Example:

    >>> round(squeezing_from_sigma(0.5).s, 7)
    0.5493061
    """
    r = abs(sigma)
    if r >= 1.:
        raise OutOfRangeError('tanh s = |sigma| = %g must be < 1' % r)
    return SqueezingParameter(np.arctanh(r), float(np.angle(sigma)) if r > 0. else 0.)


def _closed_form_terms(chi, pump, L, kin):
    if L < 0.:
        raise DomainError('L must be >= 0', field='L')
    dk = phase_mismatch(kin)
    scale = abs(kin.pump.k_p) + abs(kin.k_s) + abs(kin.k_i)
    if abs(dk) > 1e-12 * max(scale, 1.):
        raise DomainError('the closed form needs perfect phase matching, dk = %s' % dk, field='kinematics')
    if kin.k_s.imag != 0. or kin.k_i.imag != 0.:
        raise DomainError('the closed form needs real wave numbers', field='kinematics')
    kk = kin.k_s.real * kin.k_i.real
    if kk == 0.:
        raise KinematicSingularityError('k_s * k_i = 0, the closed form is singular')
    return 4. * abs(kk), abs(chi) * pump.amplitude * L, kk


def squeezing_1d_closed_form(chi, pump, L, kin, x, y):
    """
    Squeezing of a phase-matched homogeneous 1D medium,
    ``s = ln sqrt((4 k_s k_i + chi |A_p| L) / (4 k_s k_i - chi |A_p| L))`` and ``theta = phi_p - (k_s x + k_i y)``.
    Magnitudes enter through ``|chi k_s k_i|``; a negative ``chi k_s k_i`` adds pi to theta.

    :param chi: {float} homogeneous susceptibility
    :param pump: {PumpField} pump
    :param L: {float} medium length (m)
    :param kin: {ThreeWaveKinematics} kinematics with ``dk = 0``
    :param x: {float} signal position (m)
    :param y: {float} idler position (m)
    :return: {SqueezingParameter}
    :raises ValidityDomainError: if ``chi |A_p| L >= 4 |k_s k_i|``
    """
    denom, u, kk = _closed_form_terms(chi, pump, L, kin)
    if u >= denom:
        raise ValidityDomainError('chi |A_p| L = %g reaches 4 |k_s k_i| = %g (tanh s >= 1)' % (u, denom))
    s = .5 * np.log((denom + u) / (denom - u))
    theta = pump.phase - (kin.k_s.real * x + kin.k_i.real * y)
    if chi * kk < 0.:
        theta += np.pi
    return SqueezingParameter(s, theta)


def cascade_order_sigma(sigma, N):
    """Amplitude ``sigma^(N/2)`` of the cascade producing N photons.

    :Example:

    >>> cascade_order_sigma(0.5, 4)
    0.25
    """
    if N < 2 or N % 2:
        raise DomainError('N must be even and >= 2, got %r' % N, field='N')
    return sigma ** (N // 2)


def squeezing_sweep(chi, pump, lengths, kin, x, y):
    """
    :py:func:`squeezing_1d_closed_form` over a grid of medium lengths.

    :param lengths: {array} medium lengths (m)
    :return: {pandas.DataFrame} columns ``L``, ``s``, ``theta``, ``validity_margin`` with
        ``validity_margin = 1 - chi |A_p| L / (4 |k_s k_i|)``
    """
    rows = []
    for L in np.asarray(lengths, dtype=float):
        param = squeezing_1d_closed_form(chi, pump, L, kin, x, y)
        denom, u, _ = _closed_form_terms(chi, pump, L, kin)
        rows.append((L, param.s, param.theta, 1. - u / denom))
    logger.debug("squeezing sweep over %d lengths", len(rows))
    return pd.DataFrame(rows, columns=['L', 's', 'theta', 'validity_margin'])
