"""Large sieve inequalities for Dirichlet polynomials over |u| <= U.

    ∫ |Σ_n a_n n^{iu}|² du                <<  (U + N) Σ |a_n|²
    ∫ |Σ_{m,n} a_{m,n} (m/n)^{iu}|² du    <<  (MN)^ε (U + MN) Σ |a_{m,n}|²,  a_{m,n} = 0 unless (m, n) = 1

Both left sides are Hermitian forms in a with the exact kernel ∫_{-U}^{U} e^{iuL} du = 2 sin(UL)/L.
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from mpmath import mp

from src.const import DEFAULT_SEED, F_DECAY_ORDER, SIEVE_EPS
from src.specialfn.quadrature import QuadratureSpec, panels, policy_or_default, quad_interval
from src.types import QuadratureScheme, SieveTrial
from src.utils import child_seeds, make_rng, parallel_map

logger = logging.getLogger(__name__)

SPARSE_DENSITY = 0.1
BATCH = 64
STEP_DERIVATIVE_GRID = 400


@dataclass(frozen=True)
class SievePlan:
    N: int
    M: int = 1
    U: float = 1.0
    trials: int = 1
    seed: int = DEFAULT_SEED
    coprime_support: bool = False

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ValueError('N and M must be >= 1')
        if self.U < 1:
            raise ValueError('U must be >= 1')
        if self.trials < 1:
            raise ValueError('trials must be >= 1')


def sieve_kernel(L, U):
    """2 sin(UL)/L, with 2U at L = 0"""
    L = np.asarray(L, dtype=float)
    out = np.full(L.shape, 2.0 * U)
    nz = L != 0
    out[nz] = 2 * np.sin(U * L[nz]) / L[nz]
    return out


def hermitian_form(K, a):
    """a* K a for a real symmetric K; a is a vector or a matrix of column vectors"""
    Ka = K @ a.real + 1j * (K @ a.imag)
    return np.real(np.sum(np.conj(a) * Ka, axis=0))


def lattice(M, N, coprime=True):
    """(m, n) for m <= M, n <= N in row-major order, optionally only coprime pairs"""
    ms, ns = np.meshgrid(np.arange(1, M + 1), np.arange(1, N + 1), indexing='ij')
    ms, ns = ms.ravel(), ns.ravel()
    if coprime:
        keep = np.gcd(ms, ns) == 1
        ms, ns = ms[keep], ns[keep]
    return ms, ns


def coprime_mask(M, N):
    ms, ns = np.meshgrid(np.arange(1, M + 1), np.arange(1, N + 1), indexing='ij')
    return np.gcd(ms, ns) == 1


def _ls1_kernel(N, U):
    logs = np.log(np.arange(1, N + 1))
    return sieve_kernel(logs[:, None] - logs[None, :], U)


def _ls2_kernel(M, N, U, coprime):
    ms, ns = lattice(M, N, coprime)
    logs = np.log(ms) - np.log(ns)
    return sieve_kernel(logs[:, None] - logs[None, :], U)


def _mass(a):
    return np.sum(np.abs(a) ** 2, axis=0)


def ls1_ratio_of(a, U):
    """∫|Σ a_n n^{iu}|² du / ((U + N) Σ|a_n|²) for one coefficient vector; 0 for a = 0"""
    a = np.asarray(a, dtype=complex)
    mass = float(_mass(a))
    if mass == 0:
        return 0.0
    return float(hermitian_form(_ls1_kernel(a.size, U), a)) / ((U + a.size) * mass)


def ls2_ratio_of(a, U, coprime=True):
    """the two-dimensional ratio for one M x N array; entries off the coprime lattice are dropped"""
    a = np.asarray(a, dtype=complex)
    M, N = a.shape
    a = a[coprime_mask(M, N)] if coprime else a.ravel()
    mass = float(_mass(a))
    if mass == 0:
        return 0.0
    lhs = float(hermitian_form(_ls2_kernel(M, N, U, coprime), a))
    return lhs / ((M * N) ** SIEVE_EPS * (U + M * N) * mass)


def trial_kind(index):
    return SieveTrial(index % len(SieveTrial) + 1)


def trial_array(plan, dim, kind, seed):
    """one seeded coefficient array: length N when dim = 1, M x N when dim = 2"""
    rng = make_rng(seed)
    shape = (plan.N,) if dim == 1 else (plan.M, plan.N)
    if kind == SieveTrial.aligned:
        # a = (m/n)^{-iu0}, every term in phase at u = u0
        u0 = rng.uniform(-plan.U / 2, plan.U / 2)
        if dim == 1:
            a = np.exp(-1j * u0 * np.log(np.arange(1, plan.N + 1)))
        else:
            ms, ns = np.meshgrid(np.arange(1, plan.M + 1), np.arange(1, plan.N + 1), indexing='ij')
            a = np.exp(-1j * u0 * (np.log(ms) - np.log(ns)))
    else:
        a = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        if kind == SieveTrial.sparse:
            keep = rng.random(shape) < SPARSE_DENSITY
            keep.flat[rng.integers(keep.size)] = True
            a = np.where(keep, a, 0)
    if dim == 2 and plan.coprime_support:
        a = np.where(coprime_mask(plan.M, plan.N), a, 0)
    return a


def _run(plan, dim, K, norm, threads):
    seeds = child_seeds(plan.seed, plan.trials)
    keep = coprime_mask(plan.M, plan.N) if dim == 2 and plan.coprime_support else Ellipsis
    arrays = parallel_map(lambda i: trial_array(plan, dim, trial_kind(i), seeds[i])[keep].ravel(),
                          range(plan.trials), threads)
    ratios = []
    for start in range(0, plan.trials, BATCH):
        A = np.stack(arrays[start:start + BATCH], axis=1)
        mass = _mass(A)
        lhs = hermitian_form(K, A)
        ratios.extend(float(l / (norm * m)) if m > 0 else 0.0 for l, m in zip(lhs, mass))
    best = int(np.argmax(ratios))
    logger.info('large sieve dim %d (M=%d, N=%d, U=%g): max ratio %.6g over %d trials (trial %d, %s)',
                dim, plan.M, plan.N, plan.U, ratios[best], plan.trials, best, trial_kind(best).name)
    return ratios[best], ratios


def ls1_ratio(plan, threads=1):
    """(max ratio, per-trial ratios) of the one-dimensional inequality"""
    if plan.coprime_support:
        raise ValueError('the one-dimensional inequality takes no coprime support')
    return _run(plan, 1, _ls1_kernel(plan.N, plan.U), plan.U + plan.N, threads)


def ls2_ratio(plan, threads=1):
    """(max ratio, per-trial ratios) of the coprime-supported two-dimensional inequality"""
    if not plan.coprime_support:
        logger.warning('two-dimensional sieve run without coprime support (control run)')
    MN = plan.M * plan.N
    K = _ls2_kernel(plan.M, plan.N, plan.U, plan.coprime_support)
    return _run(plan, 2, K, MN ** SIEVE_EPS * (plan.U + MN), threads)


# --- the smoothed kernel F(x) = ∫ f(u) x^{iu} du

def smoothstep(s):
    """C^∞ step, 0 for s <= 0 and 1 for s >= 1, with smoothstep(s) + smoothstep(1 - s) = 1"""
    if s <= 0:
        return mp.zero
    if s >= 1:
        return mp.one
    a, b = mp.exp(-1 / s), mp.exp(-1 / (1 - s))
    return a / (a + b)


def mollified_indicator(u, U, Y):
    """f(u): 1 on |u| <= U, 0 outside (-U-Y, U+Y)"""
    return smoothstep((U + Y - abs(u)) / Y)


@lru_cache(maxsize=1)
def smoothstep_derivative_bounds(order=8):
    """sup over (0, 1) of |smoothstep^{(j)}| for j = 0..order, sampled"""
    with mp.workprec(96):
        best = [mp.zero] * (order + 1)
        for s in mp.linspace(0, 1, STEP_DERIVATIVE_GRID)[1:-1]:
            for j, d in enumerate(mp.taylor(smoothstep, s, order)):
                best[j] = max(best[j], abs(d * mp.factorial(j)))
    return tuple(float(b) for b in best)


def f_constant(j):
    """c_j with ||f^{(j)}||_1 <= c_j Y^{1-j}: the two edges each contribute Y^{1-j} ∫|smoothstep^{(j)}|"""
    return 2 * smoothstep_derivative_bounds(max(8, j))[j]


def f_decay_bound(x, Y, j=F_DECAY_ORDER):
    """c_j Y^{1-j} |(1+x)/(1-x)|^j, which dominates c_j Y^{1-j} |log x|^{-j}"""
    if x == 1:
        return math.inf
    return f_constant(j) * Y ** (1 - j) * abs((1 + x) / (1 - x)) ** j


def f_kernel(x, U, Y, j=F_DECAY_ORDER, quad=None, prec=None):
    """F(x) = ∫ f(u) x^{iu} du, real since f is even; the order j only sets the logged bound"""
    if x <= 0:
        raise ValueError('x must be positive')
    if Y < 1:
        raise ValueError('Y must be >= 1')
    quad = quad or QuadratureSpec(scheme=QuadratureScheme.doubleExponential)
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        L = mp.log(x)
        flat = 2 * U if L == 0 else 2 * mp.sin(U * L) / L
        width = Y if L == 0 else min(Y, math.pi / abs(float(L)))
        edge, _ = quad_interval(lambda u: mollified_indicator(u, U, Y) * mp.cos(u * L),
                                panels(U, U + Y, width), quad, prec)
        value = float(flat + 2 * edge)
    logger.debug('F(%g; U=%g, Y=%g) = %.15g, order-%d bound %.3g', x, U, Y, value, j, f_decay_bound(x, Y, j))
    return value
