import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def divisors(n):
    """sorted positive divisors of n"""
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def tau(n):
    return len(divisors(n))


def smallest_prime_factors(n_max):
    """spf[n] for 0 <= n <= n_max (spf[0] = spf[1] = 0)"""
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n_max) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    primes = np.nonzero(spf == 0)[0]
    primes = primes[primes >= 2]
    spf[primes] = primes
    return spf


def factorize(n, spf=None):
    """prime factorisation as a list of (p, k)"""
    out = []
    if spf is not None and n < len(spf):
        while n > 1:
            p = int(spf[n])
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        return out
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def coprime_factorizations(c):
    """pairs (c1, c2) with c1 * c2 = c, gcd(c1, c2) = 1, 1 < c1 < c"""
    return [(d, c // d) for d in divisors(c) if 1 < d < c and math.gcd(d, c // d) == 1]


def stable_sum(values):
    """order-independent correctly rounded sum of real or complex floats"""
    values = list(values)
    if any(isinstance(v, complex) for v in values):
        return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))
    return math.fsum(values)


def parallel_map(fn, items, threads=1):
    """map preserving input order; threads <= 1 runs inline"""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def child_seeds(seed, count):
    """deterministic per-trial seeds derived from one plan seed"""
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def make_rng(seed):
    return np.random.default_rng(seed)
