"""Diagonal contributions of the Kuznetsov (Maass) and Petersson (holomorphic) moments."""
import logging
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from src.afe.contour import ContourSpec
from src.afe.lvalues import c_constant
from src.afe.weights import (eisenstein_truncation, holo_rule, kernel_U_holo, kernel_V, kernel_V_holo, kernel_W,
                             weight_table, zeta_on_rule)
from src.const import DIAGONAL_HOLO_CONSTANT, DIAGONAL_MAASS_CONSTANT, EPS_POWER, MOLLIFIER_HOLO
from src.errors import BudgetError
from src.mainterm.constants import c_p, constants
from src.specialfn.quadrature import QuadratureSpec, panels, policy_or_default, quad_interval
from src.specialfn.zeta import zeta, zeta_prime
from src.transforms.kernels import h_weight, t_window
from src.types import CConstantForm, WeightKind
from src.utils import stable_sum

logger = logging.getLogger(__name__)

T_NODES = 96
HOLO_TAIL = 1e-15


@dataclass(frozen=True)
class DiagonalReport:
    numeric: float
    asymptotic: float
    residual: float
    bound_ratio: float
    terms: int = 0
    tail_bound: float = 0.0
    without_tanh: float = math.nan


def window_integrals(window, quad=None, prec=None):
    """(∫ e^{-(t-T)²/Δ²} t log t dt, ∫ e^{-(t-T)²/Δ²} t dt) over t > 0"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    lo, hi = t_window(window, quad.abs_tol ** 2)
    points = panels(lo, hi, window.Delta)
    T, D = window.T, window.Delta

    def gauss(t):
        return mp.exp(-((t - T) / D) ** 2)

    h_log, _ = quad_interval(lambda t: gauss(t) * t * mp.log(t) if t > 0 else mp.zero, points, quad, prec)
    h_plain, _ = quad_interval(lambda t: gauss(t) * t, points, quad, prec)
    return float(h_log), float(h_plain)


def h_plain_closed(window):
    """Δ²/2 e^{-T²/Δ²} + √π ΔT (1 + erf(T/Δ))/2"""
    T, D = window.T, window.Delta
    return D * D / 2 * math.exp(-(T / D) ** 2) + math.sqrt(math.pi) * D * T * (1 + math.erf(T / D)) / 2


def a2_reduction(window, quad=None, prec=None):
    """a2 read off (4/π)∫ g(t) tanh(πt) (½ζ(3/2) log t + c_P) t dt = a1 H^log + a2 H + tanh term

    g is the one-sided Gaussian of window_integrals, c_P comes from the digamma route and every
    integral is a quadrature. The tanh term uses tanh(πt) - 1 = -2/(e^{2πt} + 1) and is reported
    per unit H. Returns the pieces, 'a2' being the reduced value.
    """
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    lo, hi = t_window(window, quad.abs_tol ** 2)
    points = panels(lo, hi, window.Delta)
    T, D = window.T, window.Delta
    h_log, h_plain = window_integrals(window, quad, prec)
    with mp.workprec(prec.total_bits):
        half_zeta = zeta(mp.mpf(3) / 2, prec) / 2
        cp = c_p(prec, closed=False)
        scale = 4 / mp.pi

        def p_part(t):
            if t <= 0:
                return mp.zero
            return mp.exp(-((t - T) / D) ** 2) * t * (half_zeta * mp.log(t) + cp)

        main, _ = quad_interval(lambda t: p_part(t) * mp.tanh(mp.pi * t), points, quad, prec)
        tail, _ = quad_interval(lambda t: -2 * p_part(t) / (mp.exp(2 * mp.pi * t) + 1), points, quad, prec)
        main, tail = scale * main, scale * tail
        a2 = (main - tail - scale * half_zeta * h_log) / h_plain
        logger.debug('a2 reduction T=%g: main %s, tanh %s', T, mp.nstr(main, 15), mp.nstr(tail, 5))
        return {
            'main': float(main),
            'tanh': float(tail / h_plain),
            'H log': h_log,
            'H plain': h_plain,
            'a2': float(a2),
        }


# --- Maass

def _maass_rule(window, contour):
    _, hi = t_window(window, 1e-16)
    return contour.rule(hi)


def diagonal_maass_detail(window, contour=None, tol=1e-12, multiplier=1.0):
    """(4/π) Σ n^{-3/2} ∫ h(t) W(n², t) V(n, t) tanh(πt) t dt against a1 H^log + a2 H"""
    contour = contour or ContourSpec()
    lo, hi = t_window(window, 1e-16)
    rule = _maass_rule(window, contour)
    M, w_tail = eisenstein_truncation(WeightKind.W, hi, contour, tol, multiplier)
    N = math.isqrt(M) + 1
    ns = np.arange(1, N + 1)
    z1 = zeta_on_rule(rule, 1, 2)
    nodes, gl_weights = np.polynomial.legendre.leggauss(T_NODES)
    ts = lo + (hi - lo) * (nodes + 1) / 2
    gl_weights = gl_weights * (hi - lo) / 2
    inner = np.empty(T_NODES)
    v_bound = 0.0
    for j, t in enumerate(ts):
        kv = kernel_V(rule.nodes, t, contour, z1)
        w = weight_table(kernel_W(rule.nodes, t, contour), rule, ns.astype(float) ** 2)
        v = weight_table(kv, rule, ns)
        inner[j] = math.fsum((w * v / ns ** 1.5).tolist())
        v_bound = max(v_bound, float(np.sum(np.abs(kv))) * rule.step / (2 * math.pi))
    ht = np.array([h_weight(float(t), window) for t in ts])
    base = gl_weights * ht * inner * ts
    value = 4 / math.pi * math.fsum((base * np.tanh(np.pi * ts)).tolist())
    plain = 4 / math.pi * math.fsum(base.tolist())
    # Σ_{n>N} n^{-3/2}|W(n²)||V(n)| <= max|V| Σ_{m>M} m^{-1/2}|W(m)|
    tail = 4 / math.pi * v_bound * w_tail * float(np.sum(gl_weights * ht * ts))
    logger.debug('Maass diagonal (T=%g, Delta=%g): %d terms, tail <= %.3g', window.T, window.Delta, N, tail)
    return value, plain, N, tail


def diagonal_maass_asymptotic(window, prec=None):
    c = constants(prec)
    h_log, h_plain = window_integrals(window, prec=prec)
    return c.a1 * h_log + c.a2 * h_plain


def diagonal_maass(window, contour=None, bound_constant=DIAGONAL_MAASS_CONSTANT, eps=EPS_POWER):
    """DiagonalReport; raises BudgetError when the residual exceeds c ΔT^{3/4+ε}"""
    value, plain, N, tail = diagonal_maass_detail(window, contour)
    asym = diagonal_maass_asymptotic(window)
    residual = value - asym
    ratio = abs(residual) / (window.Delta * window.T ** (0.75 + eps))
    logger.info('Maass diagonal: %.10g vs %.10g, residual/(ΔT^(3/4+ε)) = %.3g', value, asym, ratio)
    if ratio > bound_constant:
        raise BudgetError('diagonal residual ratio %.3g exceeds %g' % (ratio, bound_constant))
    return DiagonalReport(value, asym, residual, ratio, N, tail, plain)


# --- holomorphic

def _holo_diag_weight(weight, contour, tol=HOLO_TAIL):
    """(Σ_n n^{-3/2} U(n²) V_w(n), n used) with n doubled until U(n²) n^{-1/2} max|V| < tol"""
    rule = holo_rule(contour, weight)
    ku = kernel_U_holo(rule.nodes, weight, contour)
    kv = kernel_V_holo(rule.nodes, weight, contour, zeta_on_rule(rule, 1, 2))
    v_bound = float(np.sum(np.abs(kv))) * rule.step / (2 * math.pi)
    n = max(4, math.isqrt(weight) + 1)
    while True:
        u_last = abs(weight_table(ku, rule, np.array([float(n * n)]))[0])
        if 2 * v_bound * u_last / math.sqrt(n) < tol:
            break
        n *= 2
        if n > 1 << 16:
            raise BudgetError('holomorphic diagonal at weight %d did not truncate' % weight)
    ns = np.arange(1, n + 1)
    u = weight_table(ku, rule, ns.astype(float) ** 2)
    v = weight_table(kv, rule, ns)
    return math.fsum((u * v / ns ** 1.5).tolist()), n


def diagonal_holo_terms(wwindow, contour=None):
    """{k: h_k · 2 Σ n^{-3/2} U_k(n²) V_{4k}(n)}"""
    contour = contour or ContourSpec(mollifier_scale=MOLLIFIER_HOLO)
    out = {}
    for k in wwindow.ks():
        value, _ = _holo_diag_weight(4 * k, contour)
        out[k] = wwindow.h_k(k) * 2 * value
    return out


def diagonal_holo_asymptotic(wwindow, c_form=CConstantForm.derived, prec=None):
    """2 Σ h_k (ζ(3/2) log 4k + C ζ(3/2) + ζ'(3/2))"""
    prec = policy_or_default(prec)
    C = c_constant(c_form)
    with mp.workprec(prec.total_bits):
        z, dz = float(zeta(1.5, prec)), float(zeta_prime(1.5, prec))
    return stable_sum([2 * wwindow.h_k(k) * (z * math.log(4 * k) + C * z + dz) for k in wwindow.ks()])


def diagonal_holo(wwindow, contour=None, bound_constant=DIAGONAL_HOLO_CONSTANT, eps=EPS_POWER):
    """DiagonalReport comparing the contour route with a3 Σ h log k + a4 Σ h"""
    terms = diagonal_holo_terms(wwindow, contour)
    value = stable_sum(list(terms.values()))
    if not terms:
        return DiagonalReport(0.0, 0.0, 0.0, 0.0)
    asym = diagonal_holo_asymptotic(wwindow)
    residual = value - asym
    ratio = abs(residual) / (wwindow.Delta * wwindow.K ** (-0.25 + eps))
    logger.info('holomorphic diagonal: %.10g vs %.10g, residual/(ΔK^(-1/4+ε)) = %.3g', value, asym, ratio)
    if ratio > bound_constant:
        raise BudgetError('holomorphic diagonal residual ratio %.3g exceeds %g' % (ratio, bound_constant))
    return DiagonalReport(value, asym, residual, ratio, len(terms))


def holo_theorem_form(wwindow, prec=None):
    """a3 Σ h_k log k + a4 Σ h_k"""
    c = constants(prec)
    ks = wwindow.ks()
    return c.a3 * stable_sum([wwindow.h_k(k) * math.log(k) for k in ks]) + c.a4 * stable_sum(
        [wwindow.h_k(k) for k in ks])
