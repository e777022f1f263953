import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from src.errors import NonCoprimeError
from src.utils import divisors, smallest_prime_factors, factorize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KloostermanKey:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError('modulus must be >= 1')


def mod_inverse(d, c):
    """d̄ in [0, c) with d d̄ ≡ 1 (mod c)"""
    if c < 1:
        raise ValueError('modulus must be >= 1')
    if math.gcd(d, c) != 1:
        raise NonCoprimeError('%d is not invertible modulo %d' % (d, c))
    if c == 1:
        return 0
    return pow(d % c, -1, c)


@lru_cache(maxsize=1024)
def unit_table(c):
    """(units, inverses) modulo c as int64 arrays"""
    units = [d for d in range(c) if math.gcd(d, c) == 1] if c > 1 else [0]
    inverses = [mod_inverse(d, c) for d in units] if c > 1 else [0]
    return np.array(units, dtype=np.int64), np.array(inverses, dtype=np.int64)


@lru_cache(maxsize=1024)
def cos_table(q):
    return np.cos(2 * np.pi * np.arange(q) / q)


@lru_cache(maxsize=1024)
def root_table(q):
    """e(j/q) for 0 <= j < q"""
    return np.exp(2j * np.pi * np.arange(q) / q)


def kloosterman(a, b, c):
    """S(a, b; c) = Σ_{d mod c, (d,c)=1} e((a d + b d̄)/c)"""
    KloostermanKey(a, b, c)
    if c == 1:
        return 1.0
    units, inverses = unit_table(c)
    idx = (a % c * units + b % c * inverses) % c
    return math.fsum(cos_table(c)[idx])


def kloosterman_complex(a, b, c):
    """S(a, b; c) accumulated with both real and imaginary parts"""
    if c == 1:
        return complex(1.0)
    units, inverses = unit_table(c)
    idx = (a % c * units + b % c * inverses) % c
    phases = root_table(c)[idx]
    return complex(math.fsum(phases.real), math.fsum(phases.imag))


def kloosterman_table(a_values, b_values, c):
    """S(a_i, b_i; c) for paired arrays"""
    a = np.asarray(a_values, dtype=np.int64) % c
    b = np.asarray(b_values, dtype=np.int64) % c
    if c == 1:
        return np.ones(a.shape, dtype=float)
    units, inverses = unit_table(c)
    idx = (a[..., None] * units + b[..., None] * inverses) % c
    return cos_table(c)[idx].sum(axis=-1)


def kloosterman_twisted(a, b, c1, c2):
    """S(a, b; c1 c2) = S(c̄2 a, c̄2 b; c1) S(c̄1 a, c̄1 b; c2) for coprime c1, c2"""
    if math.gcd(c1, c2) != 1:
        raise NonCoprimeError('moduli %d, %d are not coprime' % (c1, c2))
    r1 = mod_inverse(c2, c1)
    r2 = mod_inverse(c1, c2)
    return kloosterman(r1 * a, r1 * b, c1) * kloosterman(r2 * a, r2 * b, c2)


def weil_bound(a, b, c):
    return len(divisors(c)) * math.sqrt(math.gcd(math.gcd(a, b), c)) * math.sqrt(c)


def eta_t(m, t):
    """η_t(m) = Σ_{ab=m} (a/b)^{it}, real"""
    if m < 1:
        raise ValueError('m must be >= 1')
    log_m = math.log(m)
    return math.fsum(math.cos(t * (2 * math.log(d) - log_m)) for d in divisors(m))


def eta_t_table(n_max, t):
    """η_t(m) for 0 <= m <= n_max (index 0 unused) by a divisor sieve"""
    table = np.zeros(n_max + 1)
    logs = np.log(np.arange(1, n_max + 1, dtype=float))
    for d in range(1, n_max + 1):
        ks = np.arange(1, n_max // d + 1)
        table[d * ks] += np.cos(t * (logs[d - 1] - logs[ks - 1]))
    return table


def eta_t_squares(n_max, t):
    """η_t(n²) for 0 <= n <= n_max (index 0 unused); multiplicative in n"""
    spf = smallest_prime_factors(max(n_max, 2))
    table = np.zeros(n_max + 1)
    if n_max >= 1:
        table[1] = 1.0
    for n in range(2, n_max + 1):
        value = 1.0
        for p, k in factorize(n, spf):
            # η_t(p^{2k}) = Σ_{j=-k}^{k} p^{2itj}
            theta = 2 * t * math.log(p)
            value *= 1 + 2 * math.fsum(math.cos(theta * j) for j in range(1, k + 1))
        table[n] = value
    return table
