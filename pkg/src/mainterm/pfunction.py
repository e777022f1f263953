"""P(t), the t-dependence of the Maass diagonal, by three routes.

    P(t) = (1/2πi)² ∫∫ 2^{-s1} (t/π)^{s1+s2} Γ_R(1/2+s2)/Γ_R(1/2)
                      ζ(1+2s2) ζ(3/2+2s1+s2) G(s1) G(s2) ds1/s1 ds2/s2

p_numeric integrates the double contour directly, p_series sums the
Dirichlet series of ζ(3/2+2s1+s2) against the single-variable weights, and
p_residue extracts the residue at s1 = s2 = 0 by integrating around s2 = 0.
"""
import logging
import math

import numpy as np
from mpmath import mp

from src.afe.contour import ContourSpec
from src.afe.weights import NODE_POLICY, kernel_V, kernel_W, weight_table, weight_W_stirling_closed, zeta_on_rule
from src.const import EPS_POWER, MOLLIFIER_P, P_ENVELOPE_CONSTANT
from src.errors import BudgetError
from src.mainterm.constants import c_p
from src.specialfn.gamma import log_gamma_r
from src.specialfn.quadrature import policy_or_default
from src.specialfn.zeta import zeta
from src.types import WeightVariant

logger = logging.getLogger(__name__)

# distance from the contour to the poles at s = 0; the trapezoid error is ~ exp(-2π σ / step)
P_SIGMA = 0.5
# nodes where |G| has fallen below e^-G_CUTOFF carry nothing at double precision
G_CUTOFF = 60.0
CIRCLE_NODES = 64
RESIDUE_RADII = (0.2, 0.1, 0.05)


def p_contour(mollifier_scale=MOLLIFIER_P, sigma=P_SIGMA):
    return ContourSpec(sigma=sigma, mollifier_scale=mollifier_scale, variant=WeightVariant.stirlingSimplified)


def _active(rule, contour):
    y = rule.heights
    reach = math.sqrt(G_CUTOFF / contour.mollifier_scale + rule.sigma ** 2)
    return np.abs(y) <= reach


def p_numeric_detail(t, contour=None):
    """(complex value, nodes per line) of the truncated double integral at heights (log t)²"""
    if t < 10:
        raise ValueError('t must be >= 10')
    contour = contour or p_contour()
    if contour.mollifier_scale <= 0:
        raise ValueError('the double integral needs a decaying mollifier (a > 0)')
    rule = contour.rule(t)
    keep = _active(rule, contour)
    idx = np.flatnonzero(keep) - (rule.count - 1) // 2
    s = rule.nodes[keep]
    log_tp = math.log(t / math.pi)
    G = contour.G(s)
    a_part = np.exp(s * (log_tp - math.log(2))) * G / s
    with mp.workprec(NODE_POLICY.total_bits):
        base = log_gamma_r(mp.mpf(0.5), NODE_POLICY)
        gam = np.array([complex(log_gamma_r(0.5 + mp.mpc(v.real, v.imag), NODE_POLICY) - base) for v in s])
        z1 = np.array([complex(zeta(1 + 2 * complex(v), NODE_POLICY)) for v in s])
        # ζ(3/2 + 2s1 + s2) lives on the lattice 2j1 + j2
        lattice = np.arange(3 * idx.min(), 3 * idx.max() + 1)
        x0 = 1.5 + 3 * rule.sigma
        z3 = np.array([complex(zeta(mp.mpc(x0, rule.step * m), NODE_POLICY)) for m in lattice])
    b_part = np.exp(s * log_tp + gam) * z1 * G / s
    zmat = z3[2 * idx[:, None] + idx[None, :] - lattice[0]]
    value = np.einsum('i,ij,j->', a_part, zmat, b_part) * (rule.step / (2 * math.pi)) ** 2
    logger.debug('P(%g) double integral on %d x %d nodes: %.15g', t, len(s), len(s), value.real)
    return complex(value), rule.count


def p_numeric(t, contour=None):
    return p_numeric_detail(t, contour)[0].real


def p_asymptotic(t, prec=None):
    """½ζ(3/2) log t + c_P"""
    if t <= 1:
        raise ValueError('t must be > 1')
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        return float(zeta(1.5, prec) * mp.log(t) / 2 + c_p(prec))


def p_series_detail(t, contour=None, tol=1e-12):
    """(value, terms, tail) of Σ n^{-3/2} W(n², t) V(n, t) with Stirling-simplified weights"""
    contour = (contour or ContourSpec(mollifier_scale=MOLLIFIER_P)).with_variant(WeightVariant.stirlingSimplified)
    rule = contour.rule(t)
    kw = kernel_W(rule.nodes, t, contour)
    kv = kernel_V(rule.nodes, t, contour, zeta_on_rule(rule, 1, 2))
    # |n^{-u}| <= 1 on the line
    v_bound = float(np.sum(np.abs(kv)) * rule.step / (2 * math.pi))
    a = contour.mollifier_scale
    # W(m) decreases in m past t/2π; stop where the erfc tail of the Stirling weight is below tol
    n = max(2, int(math.sqrt(t / (2 * math.pi))) + 1)
    while 2 * v_bound * weight_W_stirling_closed(n * n, t, a) / math.sqrt(n) > tol:
        n *= 2
        if n > 1 << 20:
            raise BudgetError('P(%g) series needs more than %d terms' % (t, n))
    ns = np.arange(1, n + 1)
    w = weight_table(kw, rule, ns.astype(float) ** 2)
    v = weight_table(kv, rule, ns)
    terms = w * v / ns ** 1.5
    tail = 2 * v_bound * weight_W_stirling_closed(n * n, t, a) / math.sqrt(n)
    value = math.fsum(terms.tolist())
    logger.debug('P(%g) series: %d terms, tail <= %.3g', t, n, tail)
    return value, n, tail


def p_series(t, contour=None):
    return p_series_detail(t, contour)[0]


def _residue_integrand(s, t, contour):
    """the s2-integrand after taking the residue at s1 = 0"""
    log_tp = mp.log(mp.mpf(t) / mp.pi)
    gam = log_gamma_r(mp.mpf(0.5) + s) - log_gamma_r(mp.mpf(0.5))
    return mp.exp(s * log_tp + gam) * zeta(1 + 2 * s) * zeta(1.5 + s) * contour.G(s) / s


def p_residue(t, contour=None, radii=RESIDUE_RADII, nodes=CIRCLE_NODES, prec=None):
    """(residue, spread over radii) at s2 = 0 by the trapezoid rule on shrinking circles"""
    contour = contour or p_contour()
    prec = policy_or_default(prec)
    values = []
    with mp.workprec(prec.total_bits):
        for r in radii:
            total = mp.mpc(0)
            for j in range(nodes):
                z = r * mp.expjpi(2 * mp.mpf(j) / nodes)
                total += _residue_integrand(z, t, contour) * z
            values.append(total / nodes)
    spread = max(abs(v - values[-1]) for v in values)
    return float(mp.re(values[-1])), float(spread)


def p_residual_envelope(t, c=P_ENVELOPE_CONSTANT):
    """c t^{-1/4} log t; the residual t^{-1/4}(A log t + B) can change sign, so the bound is on |.|"""
    return c * t ** -0.25 * math.log(t)


def p_residual_report(ts, contour=None):
    """[(t, numeric, asymptotic, residual, |residual| / envelope)] and the log-log slope of |residual|"""
    rows = []
    for t in ts:
        numeric = p_numeric(t, contour)
        asym = p_asymptotic(t)
        residual = numeric - asym
        rows.append((t, numeric, asym, residual, abs(residual) / p_residual_envelope(t)))
        logger.info('P(%g): numeric %.12g, asymptotic %.12g, residual %.3g', t, numeric, asym, residual)
    slope = residual_slope([r[0] for r in rows], [r[3] for r in rows])
    return rows, slope


def residual_slope(ts, residuals):
    """least-squares slope of log |residual| against log t"""
    if len(ts) < 2:
        raise ValueError('need at least two points')
    x = np.log(np.asarray(ts, dtype=float))
    y = np.log(np.maximum(np.abs(np.asarray(residuals, dtype=float)), 1e-300))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def slope_in_band(slope, power=-0.25, eps=EPS_POWER, width=0.15):
    """the claimed decay t^{power+eps} within ±width in the exponent"""
    return power - width <= slope <= power + width + eps
