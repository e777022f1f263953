"""Petersson side: the trace formula checked term by term and the holomorphic mixed moment.

    Σ_f w_f λ_f(n) λ_f(m) = δ(n, m) + 2π i^{-w} Σ_c S(n, m; c)/c J_{w-1}(4π √(nm) / c)

    M_{K,Δ} = Σ_k h_k Σ_{f ∈ H_4k} w_f L(1/2, f) L(1/2, sym² f) = D + R

The moment is computed directly from the L-values and again through the trace formula,
with the off-diagonal R = 4π Σ_k h_k Σ_{m,n} U_k(m) V_k(n) / √(mn) Σ_c S(n², m; c)/c J_{4k-1}(4π n √m / c).
"""
import logging
import math

import numpy as np

from src.afe.contour import ContourSpec
from src.afe.lvalues import harmonic_weight, l_half_holo_detail, l_half_sym2_holo_detail, l_one_sym2_detail
from src.afe.weights import holo_rule, kernel_U_holo, kernel_V_holo, weight_table, zeta_on_rule
from src.arithmetic.kloosterman import kloosterman, kloosterman_table
from src.const import DEFAULT_C_MAX, MOLLIFIER_HOLO_ALT, MOMENT_WEIGHTS, SUPPORTED_WEIGHTS
from src.errors import TruncationError, UnsupportedWeightError
from src.mainterm.diagonal import diagonal_holo_terms
from src.modforms.eigenform import dim1_cuspform, normalized_lambda
from src.specialfn.bessel import bessel_j_array
from src.tracecheck.report import MomentReport
from src.utils import parallel_map, stable_sum

logger = logging.getLogger(__name__)

FORM_N_MAX = 64
PETERSSON_TOL = 1e-8
MOMENT_QUAD_TOL = 1e-8
MOMENT_TAIL_TOL = 1e-6
C_MAX_LIMIT = 1 << 14


def kloosterman_tail(A, g, weight, c_from):
    """bound on Σ_{c > c_from} |S(a, b; c)|/c |J_{w-1}(2A/c)| with √gcd(a, b) <= √g

    Uses |S(a, b; c)| <= τ(c) √(gcd(a, b, c) c), τ(c) <= 2√c, |J| <= 1 and
    |J_ν(x)| <= (x/2)^ν / Γ(ν + 1). Vectorized over A and g.
    """
    nu = weight - 1
    A = np.asarray(A, dtype=float)
    g = np.asarray(g, dtype=float)
    # beyond A/x1 the power bound drops below 1
    x1 = math.exp(math.lgamma(nu + 1) / nu)
    c1 = np.maximum(float(c_from), np.ceil(A / x1))
    flat = c1 - c_from
    with np.errstate(divide='ignore'):
        log_tail = nu * np.log(A) - math.lgamma(nu + 1) + (1 - nu) * np.log(c1) - math.log(nu - 1)
    out = 2 * np.sqrt(g) * (flat + np.exp(log_tail))
    return out if out.ndim else float(out)


def petersson_sign(weight):
    """i^{-w} for even w"""
    return -1 if weight % 4 == 2 else 1


def petersson_tail(weight, n, m, c_max):
    return 2 * math.pi * kloosterman_tail(2 * math.pi * math.sqrt(n * m), math.gcd(n, m), weight, c_max)


def certified_c_max(weight, n, m, tol=PETERSSON_TOL, start=DEFAULT_C_MAX):
    """the first of start·2^j whose Kloosterman tail is <= tol/2"""
    c_max = start
    while petersson_tail(weight, n, m, c_max) > tol / 2:
        c_max *= 2
        if c_max > C_MAX_LIMIT:
            raise TruncationError('no c_max <= %d certifies (%d, %d) at weight %d' % (C_MAX_LIMIT, n, m, weight),
                                  bound=petersson_tail(weight, n, m, C_MAX_LIMIT))
    return c_max


def _weight_data(weight, contour):
    form = dim1_cuspform(weight, FORM_N_MAX)
    l_one = l_one_sym2_detail(form, contour)
    w_f = harmonic_weight(form, contour)
    return form, w_f, w_f * l_one.tail_bound / abs(l_one.value)


def petersson_check(weight, n, m, c_max=DEFAULT_C_MAX, tol=PETERSSON_TOL, contour=None, _weight=None):
    """MomentReport of w_f λ(n) λ(m) against the Kloosterman side up to c_max (None: certified choice)"""
    if weight not in SUPPORTED_WEIGHTS:
        raise UnsupportedWeightError('weight %s does not have a one-dimensional cusp space' % weight)
    if n < 1 or m < 1:
        raise ValueError('n and m must be >= 1')
    if c_max is None:
        c_max = certified_c_max(weight, n, m, tol)
    tail = petersson_tail(weight, n, m, c_max)
    if tail > tol / 2:
        raise TruncationError('Kloosterman tail %.3g at c_max = %d exceeds %.3g' % (tail, c_max, tol / 2), bound=tail)
    form, w_f, w_err = _weight if _weight is not None else _weight_data(weight, contour)
    if max(n, m) > form.n_max:
        form = dim1_cuspform(weight, max(n, m))
    lam = normalized_lambda(form, n) * normalized_lambda(form, m)
    lhs = w_f * lam
    cs = np.arange(1, c_max + 1)
    bessel = bessel_j_array(weight - 1, 4 * math.pi * math.sqrt(n * m) / cs)
    sums = np.array([kloosterman(n, m, int(c)) for c in cs])
    parts = 2 * math.pi * petersson_sign(weight) * sums * bessel / cs
    delta = 1.0 if n == m else 0.0
    rhs = delta + stable_sum(parts.tolist())
    terms = {'delta': delta}
    terms.update({'c=%d' % c: float(v) for c, v in zip(cs, parts)})
    report = MomentReport(lhs, rhs, terms, {'kloosterman': tail, 'harmonic_weight': w_err * abs(lam)}, tol)
    logger.debug('Petersson weight %d (n=%d, m=%d, c<=%d): lhs %.15g, rhs %.15g', weight, n, m, c_max, lhs, rhs)
    return report


def petersson_grid(weights=SUPPORTED_WEIGHTS, n_max=20, tol=PETERSSON_TOL, contour=None):
    """{(weight, n, m): MomentReport} for 1 <= n <= m <= n_max, c_max certified per pair"""
    out = {}
    for weight in weights:
        data = _weight_data(weight, contour)
        for n in range(1, n_max + 1):
            for m in range(n, n_max + 1):
                out[weight, n, m] = petersson_check(weight, n, m, None, tol, contour, data)
        worst = max(out[weight, n, m].difference for n in range(1, n_max + 1) for m in range(n, n_max + 1))
        logger.info('Petersson weight %d, n, m <= %d: max |lhs - rhs| = %.3g', weight, n_max, worst)
    return out


# --- the holomorphic mixed moment

def _moment_weights(wwindow):
    weights = wwindow.weights()
    bad = [w for w in weights if w not in MOMENT_WEIGHTS]
    if bad:
        raise UnsupportedWeightError('weights %s in the window are outside %s' % (bad, list(MOMENT_WEIGHTS)))
    return weights


def _weight_term(weight, contour):
    """(w_f L(1/2, f) L(1/2, sym² f), error bound) for the form of the given weight"""
    form = dim1_cuspform(weight, FORM_N_MAX)
    l_half = l_half_holo_detail(form, contour)
    sym2 = l_half_sym2_holo_detail(form, contour=contour)
    l_one = l_one_sym2_detail(form, contour)
    w_f = harmonic_weight(form, contour)
    value = w_f * l_half.value * sym2.value
    err = w_f * (l_half.tail_bound * abs(sym2.value) + abs(l_half.value) * sym2.tail_bound) \
        + abs(value) * l_one.tail_bound / abs(l_one.value)
    logger.debug('weight %d: w_f %.12g, L(1/2) %.12g, L(1/2, sym²) %.12g', weight, w_f, l_half.value, sym2.value)
    return value, err


def moment_per_weight(wwindow, contour=None):
    """{weight: h_k w_f L(1/2, f) L(1/2, sym² f)}"""
    out = {}
    for weight in _moment_weights(wwindow):
        value, _ = _weight_term(weight, contour)
        out[weight] = wwindow.h_k(weight // 4) * value
    return out


def mixed_moment_direct_detail(wwindow, contour=None):
    """(value, error bound) of the direct evaluation"""
    parts = [(wwindow.h_k(w // 4), _weight_term(w, contour)) for w in _moment_weights(wwindow)]
    value = stable_sum([h * v for h, (v, _) in parts])
    return value, math.fsum(h * e for h, (_, e) in parts)


def mixed_moment_direct_holo(wwindow, contour=None):
    return mixed_moment_direct_detail(wwindow, contour)[0]


def trace_contour():
    """G = 1, so U(m) = Q(w/2, 2πm) and both weights decay exponentially"""
    return ContourSpec(mollifier_scale=MOLLIFIER_HOLO_ALT)


def _offdiag_weight(k, wwindow, contour, c_max, multiplier, threads):
    weight = 4 * k
    form = dim1_cuspform(weight, FORM_N_MAX)
    u_afe = l_half_holo_detail(form, contour, multiplier=multiplier)
    v_afe = l_half_sym2_holo_detail(form, contour=contour, multiplier=multiplier)
    M, N = u_afe.terms, v_afe.terms
    rule = holo_rule(contour, weight)
    U = weight_table(kernel_U_holo(rule.nodes, weight, contour), rule, np.arange(1, M + 1))
    V = weight_table(kernel_V_holo(rule.nodes, weight, contour, zeta_on_rule(rule, 1, 2)), rule, np.arange(1, N + 1))
    ms, ns = np.meshgrid(np.arange(1, M + 1), np.arange(1, N + 1), indexing='ij')
    ms, ns = ms.ravel(), ns.ravel()
    coef = (U[ms - 1] * V[ns - 1] / np.sqrt(ms * ns)).astype(float)
    root = ns * np.sqrt(ms)

    def one(c):
        # h_k J_{4k-1} over the window, taken at this k only
        sums = kloosterman_table(ns * ns, ms, c)
        bessel = bessel_j_array(weight - 1, 4 * math.pi * root / c)
        return 4 * math.pi * wwindow.h_k(k) * math.fsum((coef * sums * bessel).tolist()) / c

    per_c = parallel_map(one, range(1, c_max + 1), threads)
    c_tail = 4 * math.pi * wwindow.h_k(k) * float(np.sum(
        np.abs(coef) * kloosterman_tail(2 * math.pi * root, np.gcd(ns * ns, ms), weight, c_max)))
    diag_n = np.arange(1, min(N, math.isqrt(M)) + 1)
    d_trunc = 2 * wwindow.h_k(k) * math.fsum((U[diag_n ** 2 - 1] * V[diag_n - 1] / diag_n ** 1.5).tolist())
    w_f = harmonic_weight(form)
    afe = wwindow.h_k(k) * w_f * (u_afe.tail_bound * (abs(v_afe.value) + v_afe.tail_bound)
                                  + abs(u_afe.value) * v_afe.tail_bound)
    logger.debug('R at weight %d: m <= %d, n <= %d, c <= %d, c-tail <= %.3g', weight, M, N, c_max, c_tail)
    return per_c, c_tail, d_trunc, afe, (M, N)


def mixed_moment_tf_holo(wwindow, c_max=DEFAULT_C_MAX, contour=None, multiplier=1.0, quad_tol=MOMENT_QUAD_TOL,
                         tail_tol=MOMENT_TAIL_TOL, threads=1):
    """MomentReport of the direct moment against D + R through the Petersson formula"""
    weights = _moment_weights(wwindow)
    lhs, lhs_err = mixed_moment_direct_detail(wwindow)
    contour = contour or trace_contour()
    diag = diagonal_holo_terms(wwindow, contour)
    D = stable_sum(list(diag.values()))
    per_c = np.zeros(c_max)
    c_tail = afe_tail = diag_gap = 0.0
    lengths = {}
    for weight in weights:
        k = weight // 4
        parts, tail, d_trunc, afe, lengths[weight] = _offdiag_weight(k, wwindow, contour, c_max, multiplier, threads)
        per_c += parts
        c_tail += tail
        afe_tail += afe
        # R_full - R_trunc is bounded by the moment's AFE truncation plus the diagonal it leaves out
        diag_gap += abs(diag[k] - d_trunc)
    R = stable_sum(per_c.tolist())
    tails = {'kloosterman': c_tail, 'afe_truncation': afe_tail, 'diagonal_truncation': diag_gap,
             'direct': lhs_err}
    total = math.fsum(tails.values())
    if total > tail_tol:
        raise TruncationError('moment truncation tails %.3g exceed %.3g' % (total, tail_tol), bound=total)
    terms = {'diagonal': D, 'offdiagonal': R}
    terms.update({'diagonal k=%d' % k: v for k, v in diag.items()})
    terms.update({'c=%d' % (c + 1): float(v) for c, v in enumerate(per_c)})
    for w, (M, N) in lengths.items():
        terms['m_terms w=%d' % w], terms['n_terms w=%d' % w] = float(M), float(N)
    tolerance = quad_tol * max(1.0, abs(lhs)) + total
    report = MomentReport(lhs, D + R, terms, tails, tolerance)
    logger.info('holomorphic moment (K=%d, Delta=%g): direct %.12g, D + R = %.12g + %.12g, diff %.3g (budget %.3g)',
                wwindow.K, wwindow.Delta, lhs, D, R, report.difference, tolerance)
    return report
