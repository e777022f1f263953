"""Contour weights of approximate functional equations.

Every weight here has the shape

    w(n) = (1/2πi) ∫_(σ) K(u) n^{-u} du

for a kernel K built from a gamma quotient, an optional ζ factor, the
mollifier G(u) = exp(a u²) and 1/u. Kernels are evaluated once on the nodes of
a LineRule; a table of weights for many n is then one matrix product.
Scalar entry points evaluate the gamma quotient with src.specialfn.gamma,
tables use scipy's float loggamma.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from mpmath import mp
from scipy.special import erfc, loggamma

from src.const import DECAY_A, LOG_PI
from src.errors import NonConvergenceError, OutOfWindowError, TruncationError
from src.specialfn.gamma import log_gamma, log_gamma_c, log_gamma_r
from src.specialfn.quadrature import LineRule, PrecisionPolicy, line_error_estimate
from src.specialfn.zeta import zeta
from src.types import WeightKind, WeightVariant

logger = logging.getLogger(__name__)

LOG_2PI = math.log(2 * math.pi)
NODE_POLICY = PrecisionPolicy(64, 16)
TABLE_CHUNK = 4096
TRUNCATION_LIMIT = 1 << 22


def _lg_np(z):
    return loggamma(z)


def _lg_r_np(s):
    return -0.5 * s * LOG_PI + loggamma(0.5 * s)


def _lg_c_np(s):
    return math.log(2.0) - s * LOG_2PI + loggamma(s)


def _mp_vectorize(fn):
    def wrapped(z):
        z = np.asarray(z, dtype=complex)
        with mp.workprec(NODE_POLICY.total_bits):
            return np.array([complex(fn(mp.mpc(v.real, v.imag), NODE_POLICY)) for v in z.ravel()]).reshape(z.shape)
    return wrapped


_lg_mp = _mp_vectorize(log_gamma)
_lg_r_mp = _mp_vectorize(log_gamma_r)
_lg_c_mp = _mp_vectorize(log_gamma_c)


def _backend(exact_mp):
    if exact_mp:
        return _lg_mp, _lg_r_mp, _lg_c_mp
    return _lg_np, _lg_r_np, _lg_c_np


@lru_cache(maxsize=64)
def _zeta_line(rule, shift, scale):
    values = np.array([complex(zeta(shift + scale * complex(u), NODE_POLICY)) for u in rule.nodes])
    values.flags.writeable = False
    return values


def zeta_on_rule(rule, shift, scale):
    """ζ(shift + scale·u) on the nodes of rule (cached per rule)"""
    return _zeta_line(rule, float(shift), float(scale))


def zeta_bound_on_line(sigma, shift, scale):
    """|ζ(shift + scale·u)| <= ζ(shift + scale·sigma) on Re u = sigma (needs the argument > 1)"""
    x = shift + scale * sigma
    if x <= 1:
        raise ValueError('bound needs Re > 1, got %g' % x)
    return float(zeta(x, NODE_POLICY))


def _mollified(nodes, log_ratio, contour):
    return np.exp(log_ratio + contour.mollifier_scale * nodes * nodes) / nodes


# --- kernels; zeta_vals is either the ζ values on the nodes or a scalar bound

def kernel_W(nodes, t, contour, exact_mp=False):
    t = abs(t)
    if contour.variant == WeightVariant.stirlingSimplified:
        return _mollified(nodes, nodes * math.log(t / (2 * math.pi)), contour)
    _, lgr, _ = _backend(exact_mp)
    it = 1j * t
    head = lgr(np.array([0.5 + it, 0.5 - it]))
    ratio = lgr(0.5 + nodes + it) + lgr(0.5 + nodes - it) - head.sum()
    return _mollified(nodes, ratio, contour)


def kernel_V(nodes, t, contour, zeta_vals, exact_mp=False):
    t = abs(t)
    _, lgr, _ = _backend(exact_mp)
    base = lgr(np.array([0.5 + 0j]))[0]
    ratio = lgr(0.5 + nodes) - base
    if contour.variant == WeightVariant.stirlingSimplified:
        ratio = ratio + nodes * math.log(t / math.pi)
    else:
        it = 2j * t
        head = lgr(np.array([0.5 + it, 0.5 - it]))
        ratio = ratio + lgr(0.5 + nodes + it) + lgr(0.5 + nodes - it) - head.sum()
    return _mollified(nodes, ratio, contour) * zeta_vals


def kernel_U_holo(nodes, weight, contour):
    """Γ(u + w/2)/Γ(w/2) (2π)^{-u} G(u)/u"""
    half = weight / 2
    ratio = _lg_np(nodes + half) - _lg_np(np.array([half + 0j]))[0] - nodes * LOG_2PI
    return _mollified(nodes, ratio, contour)


def _gamma_sym2(s, weight):
    return _lg_r_np(s + 1) + _lg_c_np(s + weight - 1)


def kernel_V_holo(nodes, weight, contour, zeta_vals):
    """2 γ(1/2+u)/γ(1/2) ζ(1+2u) G(u)/u with γ(s) = Γ_R(s+1) Γ_C(s+w-1)"""
    ratio = _gamma_sym2(0.5 + nodes, weight) - _gamma_sym2(np.array([0.5 + 0j]), weight)[0]
    return 2 * _mollified(nodes, ratio, contour) * zeta_vals


def kernel_L1_head(nodes, weight, contour, zeta_vals):
    """γ(1+u)/γ(1) ζ(2+2u) G(u)/u"""
    ratio = _gamma_sym2(1 + nodes, weight) - _gamma_sym2(np.array([1 + 0j]), weight)[0]
    return _mollified(nodes, ratio, contour) * zeta_vals


def kernel_L1_dual(nodes, weight, contour, zeta_vals):
    """γ(u)/γ(1) ζ(2u) G(u)/u, on a line with Re u > 1"""
    ratio = _gamma_sym2(nodes, weight) - _gamma_sym2(np.array([1 + 0j]), weight)[0]
    return _mollified(nodes, ratio, contour) * zeta_vals


# --- tables and truncation

def weight_table(kernel_values, rule, ns):
    """Re Σ_j w_j K(u_j) n^{-u_j} for every n in ns"""
    ns = np.asarray(ns, dtype=float)
    nodes = rule.nodes
    weighted = kernel_values * rule.weights
    out = np.empty(len(ns))
    for start in range(0, len(ns), TABLE_CHUNK):
        logs = np.log(ns[start:start + TABLE_CHUNK])
        out[start:start + TABLE_CHUNK] = np.real(np.exp(-np.outer(logs, nodes)) @ weighted)
    return out


def line_abs_constant(kernel_at, rule):
    """(1/2π) ∫ |K(A+iv)| dv for the line of rule"""
    return float(np.sum(np.abs(kernel_at(rule))) * rule.step / (2 * math.pi))


def line_constants(kernel_at, line_for, growth, damping, sigma):
    """[(A, C_A)] on the lines A = lo, lo + 1/2, ... to the right of every pole

    kernel_at(rule) must return |K| (or a majorant) on the nodes of rule.
    """
    lo = max(sigma, growth - damping + 1) + 0.5
    return [(float(A), line_abs_constant(kernel_at, line_for(float(A))))
            for A in np.arange(lo, lo + 3 * DECAY_A, 0.5)]


def tail_bound(constants, M, growth, damping):
    """Σ_{n>M} 2 n^growth n^-damping |w(n)|, using |w(n)| <= C_A n^{-A} on each line A"""
    best = math.inf
    for A, C in constants:
        p = A + damping - growth
        if p <= 1:
            continue
        best = min(best, 2 * C * M ** (1 - p) / (p - 1))
    return best


def certified_truncation(constants, growth, damping, tol, start, limit=TRUNCATION_LIMIT):
    """smallest M = start·2^j whose certified tail is <= tol, with the bound"""
    M = max(1, int(math.ceil(start)))
    bound = tail_bound(constants, M, growth, damping)
    while bound > tol:
        M *= 2
        if M > limit:
            raise TruncationError('tail bound %.3g above %.3g at M = %d' % (bound, tol, M), bound=bound)
        bound = tail_bound(constants, M, growth, damping)
    logger.debug('certified truncation M = %d, tail <= %.3g', M, bound)
    return M, bound


def _checked(rule, values, what):
    value = rule.integrate(values)
    err = line_error_estimate(rule, values)
    if err > 1e-8 * max(1.0, abs(value)):
        raise NonConvergenceError('%s: line rule error %.3g' % (what, err), estimate=err)
    return value


# --- Eisenstein weights

def weight_integral(kind, n, t, contour):
    """the complex contour integral behind weight_W / weight_V"""
    if n < 1:
        raise ValueError('n must be >= 1')
    rule = contour.rule(abs(t))
    exact_mp = contour.variant == WeightVariant.exactGammaRatio
    if kind == WeightKind.W:
        kernel = kernel_W(rule.nodes, t, contour, exact_mp)
    else:
        kernel = kernel_V(rule.nodes, t, contour, zeta_on_rule(rule, 1, 2), exact_mp)
    values = kernel * np.exp(-rule.nodes * math.log(n))
    return _checked(rule, values, 'weight_%s(%d, %g)' % (kind.name, n, t))


def weight_W(m, t, contour):
    return weight_integral(WeightKind.W, m, t, contour).real


def weight_V(n, t, contour):
    return weight_integral(WeightKind.V, n, t, contour).real


def weight_W_stirling_closed(m, t, a):
    """½ erfc(log(2πm/t)/(2√a)); the step function 1[m < t/2π] when a = 0"""
    x = math.log(2 * math.pi * m / abs(t))
    if a == 0:
        return 1.0 if x < 0 else (0.5 if x == 0 else 0.0)
    return 0.5 * float(erfc(x / (2 * math.sqrt(a))))


def _eisenstein_kernel(kind, t, contour, rule, bound_sigma=None):
    if kind == WeightKind.W:
        return kernel_W(rule.nodes, t, contour)
    zeta_vals = zeta_on_rule(rule, 1, 2) if bound_sigma is None else zeta_bound_on_line(bound_sigma, 1, 2)
    return kernel_V(rule.nodes, t, contour, zeta_vals)


def eisenstein_constants(kind, t, contour):
    rule = contour.rule(abs(t))
    growth = 0.5 if kind == WeightKind.W else 1.0

    def kernel_at(line):
        return np.abs(_eisenstein_kernel(kind, t, contour, line, bound_sigma=line.sigma))

    return line_constants(kernel_at, rule.shifted, growth, 0.5, rule.sigma), growth


def eisenstein_truncation(kind, t, contour, tol, multiplier=1.0):
    """(M, tail) for Σ_{n>M} |coeff(n)| n^{-1/2} |w(n, t)| with |η_t(m)| <= 2√m, |η_t(n²)| <= 2n"""
    constants, growth = eisenstein_constants(kind, t, contour)
    return certified_truncation(constants, growth, 0.5, tol, start=multiplier * abs(t))


def eisenstein_tail_bound(kind, t, M, contour):
    constants, growth = eisenstein_constants(kind, t, contour)
    return tail_bound(constants, M, growth, 0.5)


def weight_table_W(n_max, t, contour):
    """W(m, t) for m = 1..n_max (float loggamma)"""
    rule = contour.rule(abs(t))
    return weight_table(kernel_W(rule.nodes, t, contour), rule, np.arange(1, n_max + 1))


def weight_table_V(n_max, t, contour):
    rule = contour.rule(abs(t))
    kernel = kernel_V(rule.nodes, t, contour, zeta_on_rule(rule, 1, 2))
    return weight_table(kernel, rule, np.arange(1, n_max + 1))


def decay_constant(kind, ms, ts, contour, A=DECAY_A):
    """sup |w(m,t)| (1+m/t)^A over the grid, over log t for V"""
    worst = 0.0
    for t in ts:
        table = weight_table_W(max(ms), t, contour) if kind == WeightKind.W else weight_table_V(max(ms), t, contour)
        scale = 1.0 if kind == WeightKind.W else math.log(t)
        for m in ms:
            worst = max(worst, abs(table[m - 1]) * (1 + m / t) ** A / scale)
    return worst


# --- Taylor expansion in t around T

def taylor_polynomial(l):
    """coefficients (ascending) of P_l(s) = binom(s/2, l)"""
    poly = np.polynomial.Polynomial([1.0])
    for j in range(l):
        poly = poly * np.polynomial.Polynomial([-j, 0.5]) / (j + 1)
    return poly.coef


def taylor_weight(m, t, window, L, kind, contour):
    """Σ_{l<=L} W_l(m, T) (or V_l) for the Stirling-simplified weight at t, valid for |t - T| <= Δ (log T)²

    t^u = T^u Σ_l P_l(u) ((t² - T²)/T²)^l, so W_l(m,T) carries P_l(u) inside
    the contour integral taken at T.
    """
    if L < 0:
        raise ValueError('L must be >= 0')
    T, reach = window.T, window.Delta * math.log(window.T) ** 2
    if abs(t - T) > reach:
        raise OutOfWindowError('|t - T| = %g exceeds Delta (log T)^2 = %g' % (abs(t - T), reach))
    x = (t * t - T * T) / (T * T)
    if abs(x) >= 1:
        raise OutOfWindowError('binomial series diverges for (t²-T²)/T² = %g' % x)
    contour = contour.with_variant(WeightVariant.stirlingSimplified)
    rule = contour.rule(T)
    if kind == WeightKind.W:
        kernel = kernel_W(rule.nodes, T, contour)
    else:
        kernel = kernel_V(rule.nodes, T, contour, zeta_on_rule(rule, 1, 2))
    kernel = kernel * np.exp(-rule.nodes * math.log(m))
    total = 0.0
    for l in range(L + 1):
        poly = np.polynomial.polynomial.polyval(rule.nodes, taylor_polynomial(l))
        total += x ** l * rule.integrate(kernel * poly).real
    return total


# --- holomorphic weights

def holo_rule(contour, weight, sigma=None):
    degree = weight if sigma is None else weight + sigma
    return contour.rule(weight, gamma_degree=degree, sigma=sigma)


def weight_U_holo(m, weight, contour):
    rule = holo_rule(contour, weight)
    values = kernel_U_holo(rule.nodes, weight, contour) * np.exp(-rule.nodes * math.log(m))
    return _checked(rule, values, 'U(%d)' % m).real


def weight_U_holo_closed(m, weight):
    """regularized upper incomplete gamma Q(w/2, 2πm), the a = 0 value of U"""
    return float(mp.gammainc(mp.mpf(weight) / 2, 2 * mp.pi * m, regularized=True))


def weight_V_holo(n, weight, contour):
    rule = holo_rule(contour, weight)
    values = kernel_V_holo(rule.nodes, weight, contour, zeta_on_rule(rule, 1, 2)) * np.exp(-rule.nodes * math.log(n))
    return _checked(rule, values, 'V_holo(%d)' % n).real


def weight_V_holo_asymptotic(n, weight, c_constant):
    return math.log(weight / n) + c_constant
