"""Riemann zeta and its derivative by Euler-Maclaurin summation."""
import logging
import math
from functools import lru_cache

from mpmath import mp

from src.errors import NonConvergenceError, PoleError
from src.specialfn.quadrature import policy_or_default

logger = logging.getLogger(__name__)


def _cutoff(s, bits):
    # terms of the Bernoulli tail shrink like (|s| + 2j)^2 / (2πN)^2
    return max(20, int(math.ceil(float(abs(s)) / math.pi)) + bits // 8 + 10)


def _euler_maclaurin(s, bits, derivative):
    n_cut = _cutoff(s, bits)
    eps = mp.mpf(2) ** (-bits)
    big_n = mp.mpf(n_cut)
    log_n = mp.log(big_n)
    n_pow = mp.power(big_n, -s)
    if derivative:
        head = -mp.fsum(mp.log(n) * mp.power(n, -s) for n in range(2, n_cut))
        total = head - log_n * big_n * n_pow / (s - 1) - big_n * n_pow / (s - 1) ** 2 - log_n * n_pow / 2
    else:
        head = mp.fsum(mp.power(n, -s) for n in range(1, n_cut))
        total = head + big_n * n_pow / (s - 1) + n_pow / 2
    # P_j(s) = s (s+1) ... (s+2j-2) and its derivative
    poly, dpoly = s, mp.mpf(1)
    power = n_pow / big_n
    fact = mp.mpf(2)
    bound = None
    for j in range(1, 4 * bits):
        coeff = mp.bernoulli(2 * j) / fact
        if derivative:
            term = coeff * power * (dpoly - log_n * poly)
        else:
            term = coeff * power * poly
        total += term
        # remainder is at most |s+2j+1|/(σ+2j+1) times the next term
        nxt_poly = poly * (s + 2 * j - 1) * (s + 2 * j)
        nxt = abs(mp.bernoulli(2 * j + 2) / (fact * (2 * j + 1) * (2 * j + 2)) * power / (big_n * big_n) * nxt_poly)
        if derivative:
            nxt *= (log_n + 2 * j + 2)
        bound = nxt * abs(s + 2 * j + 1) / (mp.re(s) + 2 * j + 1)
        if bound < eps * max(1, abs(total)):
            break
        dpoly = dpoly * (s + 2 * j - 1) * (s + 2 * j) + poly * (2 * s + 4 * j - 1)
        poly = nxt_poly
        power /= big_n * big_n
        fact *= (2 * j + 1) * (2 * j + 2)
    else:
        raise NonConvergenceError('Euler-Maclaurin tail did not certify at s=%s' % s, estimate=float(bound))
    return total, bound


@lru_cache(maxsize=8192)
def _zeta_cached(s, bits, derivative):
    with mp.workprec(bits):
        value, bound = _euler_maclaurin(s, bits, derivative)
    logger.debug('zeta%s(%s): tail bound %.3g', "'" if derivative else '', s, float(bound))
    return value


def zeta(s, prec=None):
    """ζ(s) for s != 1"""
    prec = policy_or_default(prec)
    bits = prec.total_bits
    with mp.workprec(bits):
        s = mp.mpmathify(s)
        if s == 1:
            raise PoleError('zeta has a pole at s = 1')
        value = _zeta_cached(s, bits, False)
        if mp.im(s) == 0:
            value = mp.re(value)
    return +value


def zeta_prime(s, prec=None):
    """ζ'(s), differentiating the Euler-Maclaurin formula term by term"""
    prec = policy_or_default(prec)
    bits = prec.total_bits
    with mp.workprec(bits):
        s = mp.mpmathify(s)
        if s == 1:
            raise PoleError('zeta_prime has a pole at s = 1')
        value = _zeta_cached(s, bits, True)
        if mp.im(s) == 0:
            value = mp.re(value)
    return +value


def zeta_partial_oracle(s, terms=10000):
    """Σ_{n<=terms} n^-s plus the integral tail and the half end term, for Re s > 1"""
    s = mp.mpmathify(s)
    n = mp.mpf(terms)
    head = mp.fsum(mp.power(k, -s) for k in range(1, terms + 1))
    return head + mp.power(n, 1 - s) / (s - 1) - mp.power(n, -s) / 2 + s * mp.power(n, -s - 1) / 12
