"""Log-gamma, gamma factors and digamma by argument shift plus asymptotic series."""
import logging
import math

from mpmath import mp

from src.errors import PoleError
from src.specialfn.quadrature import policy_or_default

logger = logging.getLogger(__name__)


def _is_pole(z):
    re, im = mp.re(z), mp.im(z)
    if abs(im) > mp.mpf(2) ** (-mp.prec + 8):
        return False
    n = mp.nint(re)
    return n <= 0 and abs(re - n) <= mp.mpf(2) ** (-mp.prec + 8) * max(1, abs(n))


def _shift_radius(bits):
    # Stirling error after optimal truncation is about exp(-2π|w|)
    return max(10.0, 0.12 * bits + 5.0)


def _stirling(w, bits):
    """(w - 1/2) log w - w + log(2π)/2 + Σ B_2j / (2j(2j-1) w^(2j-1))"""
    total = (w - mp.mpf(0.5)) * mp.log(w) - w + mp.log(2 * mp.pi) / 2
    eps = mp.mpf(2) ** (-bits)
    w2 = w * w
    power = w
    j = 1
    while True:
        term = mp.bernoulli(2 * j) / (2 * j * (2 * j - 1) * power)
        total += term
        if abs(term) < eps * max(1, abs(total)) or j > 4 * bits:
            break
        power *= w2
        j += 1
    return total


def _shift_count(z, bits):
    radius = _shift_radius(bits)
    if abs(z) >= radius and mp.re(z) > 0:
        return 0
    need = radius - float(mp.re(z))
    return max(0, int(math.ceil(need)))


def log_gamma(z, prec=None):
    """principal branch of log Γ(z), continuous on the plane cut along (-∞, 0]"""
    prec = policy_or_default(prec)
    bits = prec.total_bits
    with mp.workprec(bits):
        z = mp.mpmathify(z)
        if _is_pole(z):
            raise PoleError('log_gamma has a pole at %s' % z)
        shift = _shift_count(z, bits)
        w = z + shift
        value = _stirling(w, bits)
        # Σ of principal logs is the analytic continuation from the positive axis
        for j in range(shift):
            value -= mp.log(z + j)
        if mp.im(z) == 0 and mp.re(z) > 0:
            value = mp.re(value)
    return +value


def gamma(z, prec=None):
    return mp.exp(log_gamma(z, prec))


def gamma_r(s, prec=None):
    """Γ_R(s) = π^(-s/2) Γ(s/2)"""
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        s = mp.mpmathify(s)
        if _is_pole(s / 2):
            raise PoleError('gamma_r has a pole at %s' % s)
        return mp.exp(-s / 2 * mp.log(mp.pi) + log_gamma(s / 2, prec))


def log_gamma_r(s, prec=None):
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        s = mp.mpmathify(s)
        return -s / 2 * mp.log(mp.pi) + log_gamma(s / 2, prec)


def gamma_c(s, prec=None):
    """Γ_C(s) = 2 (2π)^(-s) Γ(s)"""
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        s = mp.mpmathify(s)
        return 2 * mp.exp(-s * mp.log(2 * mp.pi) + log_gamma(s, prec))


def log_gamma_c(s, prec=None):
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        s = mp.mpmathify(s)
        return mp.log(2) - s * mp.log(2 * mp.pi) + log_gamma(s, prec)


def digamma(z, prec=None):
    """ψ(z) = Γ'(z)/Γ(z) via ψ(z) = ψ(z+N) - Σ 1/(z+j) and the asymptotic series"""
    prec = policy_or_default(prec)
    bits = prec.total_bits
    with mp.workprec(bits):
        z = mp.mpmathify(z)
        if _is_pole(z):
            raise PoleError('digamma has a pole at %s' % z)
        shift = _shift_count(z, bits)
        w = z + shift
        value = mp.log(w) - 1 / (2 * w)
        eps = mp.mpf(2) ** (-bits)
        w2 = w * w
        power = w2
        j = 1
        while True:
            term = mp.bernoulli(2 * j) / (2 * j * power)
            value -= term
            if abs(term) < eps * max(1, abs(value)) or j > 4 * bits:
                break
            power *= w2
            j += 1
        for j in range(shift):
            value -= 1 / (z + j)
        if mp.im(z) == 0:
            value = mp.re(value)
    return +value


def psi_quarter_closed():
    """ψ(1/4) = -γ - π/2 - 3 log 2"""
    return -mp.euler - mp.pi / 2 - 3 * mp.log(2)


def psi_three_quarter_closed():
    """ψ(3/4) = -γ + π/2 - 3 log 2"""
    return -mp.euler + mp.pi / 2 - 3 * mp.log(2)
