"""Bessel functions of real and purely imaginary order.

Real order: power series below x = max(20, 2*order), Hankel expansion above it,
falling back to the series with extra guard bits when the asymptotic terms stall.
Imaginary order J: power series at a precision raised by the e^x cancellation.
Imaginary order K: e^(-x) ∫_0^∞ e^(-x (cosh u - 1)) cos(2tu) du on oscillation-sized panels,
at a precision raised by the saddle-point size of K.
"""
import logging
import math
from dataclasses import replace

import numpy as np
from mpmath import mp
from scipy import special

from src.errors import NonConvergenceError
from src.specialfn.gamma import log_gamma
from src.specialfn.quadrature import PrecisionPolicy, QuadratureSpec, panels, policy_or_default, quad_interval

logger = logging.getLogger(__name__)

MAX_SERIES_BITS = 4096
LOG2E = 1.0 / math.log(2.0)
K_GUARD_BITS = 16


def switch_point(order):
    return max(20.0, 2.0 * float(order))


def series_guard_bits(x):
    # the terms peak near e^x while the sum is O(1)
    return int(math.ceil(LOG2E * float(x))) + 16


def bessel_j_series(order, x, bits):
    with mp.workprec(bits):
        order = mp.mpmathify(order)
        x = mp.mpmathify(x)
        half = x / 2
        term = mp.exp(order * mp.log(half) - log_gamma(order + 1, PrecisionPolicy(bits, 0)))
        total = term
        q = -half * half
        eps = mp.mpf(2) ** (-bits)
        j = 0
        while True:
            j += 1
            term = term * q / (j * (j + order))
            total += term
            if j > half and abs(term) < eps * max(mp.mpf(1) / 2 ** 64, abs(total)):
                break
    return total


def bessel_j_asymptotic(order, x, bits):
    """(value, smallest retained term) of the Hankel expansion"""
    with mp.workprec(bits):
        order = mp.mpmathify(order)
        x = mp.mpmathify(x)
        mu = 4 * order * order
        chi = x - order * mp.pi / 2 - mp.pi / 4
        p_sum, q_sum = mp.mpf(0), mp.mpf(0)
        a = mp.mpf(1)
        eps = mp.mpf(2) ** (-bits)
        smallest = mp.inf
        k = 0
        while True:
            term = a / mp.power(x, k)
            if abs(term) > smallest and k > 2:
                break
            smallest = min(smallest, abs(term))
            if k % 4 == 0:
                p_sum += term
            elif k % 4 == 1:
                q_sum += term
            elif k % 4 == 2:
                p_sum -= term
            else:
                q_sum -= term
            if smallest < eps:
                break
            k += 1
            a = a * (mu - (2 * k - 1) ** 2) / (k * 8)
            if a == 0:
                break
        value = mp.sqrt(2 / (mp.pi * x)) * (p_sum * mp.cos(chi) - q_sum * mp.sin(chi))
    return value, smallest


def bessel_j(order, x, prec=None):
    """J_order(x) for real order >= 0 and x >= 0"""
    prec = policy_or_default(prec)
    bits = prec.total_bits
    if x == 0:
        return mp.mpf(1) if order == 0 else mp.mpf(0)
    if float(x) > switch_point(order):
        value, smallest = bessel_j_asymptotic(order, x, bits)
        if smallest < mp.mpf(2) ** (-bits):
            return +value
        logger.debug('Hankel expansion stalls at %.3g for J_%s(%s); using the series', float(smallest), order, x)
    series_bits = bits + series_guard_bits(x)
    if series_bits > MAX_SERIES_BITS:
        raise NonConvergenceError('J_%s(%s) needs %d series bits' % (order, x, series_bits))
    return +bessel_j_series(order, x, series_bits)


def bessel_j_array(order, xs):
    """vectorized float64 J_order(x) for long coefficient sums"""
    return special.jv(order, np.asarray(xs, dtype=float))


def bessel_j_imag(t, x, prec=None):
    """J_{2it}(x) by the power series; requires working_bits above the cancellation estimate"""
    prec = policy_or_default(prec)
    prec.require(1.5 * float(x), 'J_{2it}(%s)' % x)
    bits = prec.total_bits
    with mp.workprec(bits):
        t = mp.mpmathify(t)
        x = mp.mpmathify(x)
        nu = 2j * t
        half = x / 2
        term = mp.exp(nu * mp.log(half) - log_gamma(1 + nu, PrecisionPolicy(bits, 0)))
        total = term
        q = -half * half
        eps = mp.mpf(2) ** (-bits)
        j = 0
        while True:
            j += 1
            term = term * q / (j * (j + nu))
            total += term
            if j > half and abs(term) < eps * abs(total):
                break
    return +total


def k_cancellation_bits(t, x):
    """bits lost when the scaled integrand, of size 1 at u = 0, cancels down to e^x |K_{2it}(x)|

    Saddle point: log|K| ≈ -√(x² - 4t²) - 2t·arcsin(2t/x) for x >= 2|t|; below the
    turning point K oscillates under the envelope e^(-π|t|).
    """
    t, x = abs(float(t)), float(x)
    nu = 2 * t
    if x >= nu:
        nats = math.sqrt(x * x - nu * nu) + nu * math.asin(nu / x) - x
    else:
        nats = math.pi * t - x
    return max(0.0, nats) * LOG2E + K_GUARD_BITS


def _k_scaled(t, x, prec, quad):
    """e^x K_{2it}(x) = ∫_0^∞ e^(-x (cosh u - 1)) cos(2tu) du, accepted against the expected size of K"""
    if x <= 0:
        raise ValueError('bessel_k_imag needs x > 0')
    lost = k_cancellation_bits(t, x)
    prec = policy_or_default(prec).scaled(lost)
    quad = quad or QuadratureSpec()
    spec = replace(quad, abs_tol=quad.rel_tol * mp.mpf(2) ** -int(math.ceil(lost)))
    bits = prec.total_bits
    with mp.workprec(bits):
        t = mp.mpmathify(t)
        x = mp.mpmathify(x)
        # e^(-x (cosh U - 1)) below 2^-bits
        top = mp.acosh(1 + (bits + 8) * mp.log(2) / x)
        width = min(1.0, math.pi / max(1.0, 2 * abs(float(t))), 4.0 / math.sqrt(float(x)))

        def integrand(u):
            return mp.exp(-x * (mp.cosh(u) - 1)) * mp.cos(2 * t * u)

        value, err = quad_interval(integrand, panels(0, float(top), width), spec, prec)
    logger.debug('K_{2i%s}(%s): %d bits, scaled value %s, err %.3g', t, x, bits, mp.nstr(value, 8), float(err))
    return value


def bessel_k_imag(t, x, prec=None, quad=None):
    """K_{2it}(x) = ∫_0^∞ e^(-x cosh u) cos(2tu) du (real)"""
    value = _k_scaled(t, x, prec, quad)
    return mp.exp(-mp.mpf(x)) * value


def log_abs_bessel_k_imag(t, x, prec=None, quad=None):
    """(log|K_{2it}(x)|, sign) for products with exponentially growing factors; K itself is never formed"""
    value = _k_scaled(t, x, prec, quad)
    if value == 0:
        return -mp.inf, 0
    return mp.log(abs(value)) - x, (1 if value > 0 else -1)


def bessel_i_imag_scaled(t, x, prec=None):
    """I_{2it}(x)/cosh(πt) by the power series, the cosh folded into the leading logarithm

    K_{2it}(x) sinh(πt) = -π Im(I_{2it}(x)) / (2 cosh(πt)) for real t != 0.
    """
    prec = policy_or_default(prec)
    prec.require(1.5 * float(x), 'I_{2it}(%s)' % x)
    bits = prec.total_bits
    with mp.workprec(bits):
        t = mp.mpmathify(t)
        x = mp.mpmathify(x)
        nu = 2j * t
        half = x / 2
        log_cosh = mp.pi * abs(t) + mp.log1p(mp.exp(-2 * mp.pi * abs(t))) - mp.log(2)
        term = mp.exp(nu * mp.log(half) - log_gamma(1 + nu, PrecisionPolicy(bits, 0)) - log_cosh)
        total = term
        q = half * half
        eps = mp.mpf(2) ** (-bits)
        j = 0
        while True:
            j += 1
            term = term * q / (j * (j + nu))
            total += term
            if j > half and abs(term) < eps * abs(total):
                break
    return +total
