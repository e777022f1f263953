import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.const import SUPPORTED_WEIGHTS
from src.errors import OutOfRangeError, UnsupportedWeightError
from src.modforms.qexpansion import delta_qexp, eisenstein_qexp
from src.utils import factorize

logger = logging.getLogger(__name__)

# weight -> (power of E4, power of E6) completing Δ to that weight
_COMPLEMENT = {12: (0, 0), 16: (1, 0), 18: (0, 1), 20: (2, 0), 22: (1, 1), 26: (2, 1)}


@dataclass(frozen=True)
class HoloFormData:
    weight: int
    a: tuple
    lam: np.ndarray
    n_max: int

    @property
    def k(self):
        """the k of weight 4k (fractional for weights not divisible by 4)"""
        return self.weight / 4

    @property
    def sign_forced_zero(self):
        return self.weight % 4 != 0


@lru_cache(maxsize=32)
def dim1_cuspform(weight, n_max):
    """the normalised eigenform spanning a one-dimensional S_weight(SL2(Z))"""
    if weight not in SUPPORTED_WEIGHTS:
        raise UnsupportedWeightError('weight %s does not have a one-dimensional cusp space' % weight)
    e4_power, e6_power = _COMPLEMENT[weight]
    series = delta_qexp(n_max) * eisenstein_qexp(4, n_max) ** e4_power * eisenstein_qexp(6, n_max) ** e6_power
    a = tuple(int(c) for c in series.coeffs)
    lam = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        lam[n] = a[n] / n ** ((weight - 1) / 2)
    lam.flags.writeable = False
    logger.debug('weight %d form: a(2) = %d, a(3) = %d', weight, a[2], a[3])
    return HoloFormData(weight, a, lam, n_max)


def normalized_lambda(form, n):
    if not 1 <= n <= form.n_max:
        raise OutOfRangeError('n = %d outside 1..%d' % (n, form.n_max))
    return float(form.lam[n])


def hecke_coefficient(form, n):
    """exact a(n) from a(p), p <= n_max, by multiplicativity and the prime-power recursion"""
    if n <= form.n_max:
        return form.a[n]
    value = 1
    for p, k in factorize(n):
        if p > form.n_max:
            raise OutOfRangeError('prime %d exceeds n_max = %d' % (p, form.n_max))
        value *= _prime_power(form, p, k)
    return value


def _prime_power(form, p, k):
    prev, cur = 1, form.a[p]
    for _ in range(1, k):
        prev, cur = cur, form.a[p] * cur - p ** (form.weight - 1) * prev
    return cur if k >= 1 else 1


def hecke_extend(form, n_total):
    """λ(n) for 0 <= n <= n_total (index 0 unused)"""
    out = np.zeros(n_total + 1)
    half = (form.weight - 1) / 2
    for n in range(1, n_total + 1):
        out[n] = hecke_coefficient(form, n) / n ** half
    return out


def lambda_squares(form, n_total):
    """λ(n²) for 0 <= n <= n_total (index 0 unused)"""
    out = np.zeros(n_total + 1)
    for n in range(1, n_total + 1):
        value = 1.0
        for p, k in factorize(n):
            value *= _lambda_prime_power(form, p, 2 * k)
        out[n] = value
    return out


def _lambda_prime_power(form, p, k):
    # λ(p^{j+1}) = λ(p) λ(p^j) - λ(p^{j-1})
    if p > form.n_max:
        raise OutOfRangeError('prime %d exceeds n_max = %d' % (p, form.n_max))
    lp = form.lam[p]
    prev, cur = 1.0, lp
    for _ in range(1, k):
        prev, cur = cur, lp * cur - prev
    return cur if k >= 1 else 1.0


def hecke_relation_residual(form, limit=None):
    """max |λ(m)λ(n) - Σ_{d|(m,n)} λ(mn/d²)| over mn <= limit"""
    limit = limit or form.n_max
    worst = 0.0
    for m in range(1, limit + 1):
        for n in range(1, limit // m + 1):
            g = math.gcd(m, n)
            rhs = sum(form.lam[m * n // (d * d)] for d in range(1, g + 1) if g % d == 0)
            worst = max(worst, abs(form.lam[m] * form.lam[n] - rhs))
    return worst
