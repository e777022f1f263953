import logging
import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp

from src.afe.contour import ContourSpec
from src.afe.weights import (certified_truncation, eisenstein_constants, holo_rule, kernel_L1_dual, kernel_L1_head,
                             kernel_U_holo, kernel_V_holo, line_constants, weight_table, weight_table_V,
                             weight_table_W, weight_V_holo, weight_V_holo_asymptotic, zeta_bound_on_line, zeta_on_rule)
from src.arithmetic.kloosterman import eta_t_squares, eta_t_table
from src.const import EULER_GAMMA, LOG_2, LOG_PI, MOLLIFIER_HOLO, MOMENT_WEIGHTS
from src.modforms.eigenform import hecke_extend, lambda_squares
from src.specialfn.gamma import log_gamma_r, psi_three_quarter_closed
from src.specialfn.zeta import zeta
from src.types import CConstantForm, Sym2Variant, WeightKind, WeightVariant
from src.utils import stable_sum

logger = logging.getLogger(__name__)

DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class AfeValue:
    value: float
    terms: int
    tail_bound: float
    polar: float = 0.0
    neglected: float = 0.0  # bound on residues left out (exponentially small in t)
    sign_forced_zero: bool = False


def _exact(contour):
    contour = contour or ContourSpec()
    return contour.with_variant(WeightVariant.exactGammaRatio)


def _holo_contour(contour):
    return contour or ContourSpec(mollifier_scale=MOLLIFIER_HOLO)


def central_zeta(t, prec=None):
    """|ζ(1/2+it)|²"""
    value = zeta(mp.mpc(0.5, t), prec)
    return float(abs(value) ** 2)


def _far_poles(t, contour):
    # residues at u = ±1/2 ± i t carry G(1/2 + i t) ~ exp(a/4 - a t²)
    a = contour.mollifier_scale
    if a == 0:
        return math.inf
    return 8 * math.exp(a / 4 - a * t * t) * max(1.0, t)


def l_half_eisenstein_afe_detail(t, window=None, contour=None, tol=DEFAULT_TAIL_TOL, multiplier=1.0):
    if t < 10:
        raise ValueError('t must be >= 10')
    contour = _exact(contour)
    scale = max(t, window.T) if window is not None else t
    M, tail = certified_truncation(*eisenstein_constants(WeightKind.W, t, contour), 0.5, tol / 2, multiplier * scale)
    weights = weight_table_W(M, t, contour)
    eta = eta_t_table(M, t)[1:]
    ms = np.arange(1, M + 1, dtype=float)
    value = 2 * stable_sum((eta * weights / np.sqrt(ms)).tolist())
    logger.debug('L(1/2, E_%g): %d terms, tail <= %.3g', t, M, 2 * tail)
    return AfeValue(value, M, 2 * tail, neglected=_far_poles(t, contour))


def l_half_eisenstein_afe(t, window=None, contour=None):
    """|ζ(1/2+it)|² = 2 Σ η_t(m) m^{-1/2} W(m, t)"""
    return l_half_eisenstein_afe_detail(t, window, contour).value


def sym2_polar_term(t, contour=None):
    """4 G(1/2) |Γ_R(1+2it) ζ(1+2it)|² / (Γ_R(1/2) |Γ_R(1/2+2it)|²), the residues at s = 0, 1"""
    contour = _exact(contour)
    with mp.workprec(max(mp.prec, 128)):
        log_ratio = (2 * mp.re(log_gamma_r(mp.mpc(1, 2 * t))) - log_gamma_r(mp.mpf(0.5))
                     - 2 * mp.re(log_gamma_r(mp.mpc(0.5, 2 * t))))
        z1 = abs(zeta(mp.mpc(1, 2 * t))) ** 2
        value = 4 * mp.exp(contour.mollifier_scale / 4 + log_ratio) * z1
    return float(value)


def l_half_sym2_eisenstein_afe_detail(t, window=None, contour=None, tol=DEFAULT_TAIL_TOL, multiplier=1.0):
    if t < 10:
        raise ValueError('t must be >= 10')
    contour = _exact(contour)
    scale = max(t, window.T) if window is not None else t
    M, tail = certified_truncation(*eisenstein_constants(WeightKind.V, t, contour), 0.5, tol / 2, multiplier * scale)
    weights = weight_table_V(M, t, contour)
    eta = eta_t_squares(M, t)[1:]
    ns = np.arange(1, M + 1, dtype=float)
    polar = sym2_polar_term(t, contour)
    value = 2 * stable_sum((eta * weights / np.sqrt(ns)).tolist()) - polar
    logger.debug('ζ(1/2)|ζ(1/2+2i%g)|²: %d terms, polar %.6g', t, M, polar)
    return AfeValue(value, M, 2 * tail, polar=polar, neglected=_far_poles(2 * t, contour))


def l_half_sym2_eisenstein_afe(t, window=None, contour=None):
    """ζ(1/2)|ζ(1/2+2it)|², signed"""
    return l_half_sym2_eisenstein_afe_detail(t, window, contour).value


def l_half_sym2_eisenstein_direct(t):
    return float(zeta(0.5) * abs(zeta(mp.mpc(0.5, 2 * t))) ** 2)


# --- holomorphic forms

def _holo_constants(kernel_fn, weight, contour, growth, damping, sigma, zeta_shift):
    def kernel_at(line):
        return np.abs(kernel_fn(line.nodes, weight, contour, zeta_bound_on_line(line.sigma, zeta_shift, 2)))

    return line_constants(kernel_at, lambda A: holo_rule(contour, weight, sigma=A), growth, damping, sigma)


def _u_holo(nodes, weight, contour, _zeta):
    return kernel_U_holo(nodes, weight, contour)


def l_half_holo_detail(form, contour=None, tol=DEFAULT_TAIL_TOL, multiplier=1.0):
    if form.sign_forced_zero:
        logger.info('weight %d: root number -1 forces L(1/2, f) = 0', form.weight)
        return AfeValue(0.0, 0, 0.0, sign_forced_zero=True)
    contour = _holo_contour(contour)
    rule = holo_rule(contour, form.weight)
    constants = _holo_constants(_u_holo, form.weight, contour, 0.5, 0.5, rule.sigma, 1)
    M, tail = certified_truncation(constants, 0.5, 0.5, tol / 2, multiplier * form.weight / 2)
    lam = hecke_extend(form, M)[1:]
    weights = weight_table(kernel_U_holo(rule.nodes, form.weight, contour), rule, np.arange(1, M + 1))
    value = 2 * stable_sum((lam * weights / np.sqrt(np.arange(1, M + 1))).tolist())
    return AfeValue(value, M, 2 * tail)


def l_half_holo(form, contour=None):
    """L(1/2, f) = 2 Σ λ(n) n^{-1/2} U(n); 0 with a flag when 4 ∤ weight"""
    return l_half_holo_detail(form, contour).value


def c_constant(form=CConstantForm.derived):
    """C in V_{4k}(n) = log(4k/n) + C + O(n/k)"""
    if form == CConstantForm.printed:
        psi = float(psi_three_quarter_closed())
        return 2 * EULER_GAMMA - 1.5 * LOG_PI + psi / 2 - 2 * LOG_2
    return 1.5 * EULER_GAMMA - 1.5 * LOG_PI - 2.5 * LOG_2 + math.pi / 4


def l_half_sym2_holo_detail(form, variant=Sym2Variant.exactContour, contour=None, tol=DEFAULT_TAIL_TOL,
                            multiplier=1.0, c_form=CConstantForm.derived):
    contour = _holo_contour(contour)
    if variant == Sym2Variant.asymptotic:
        C = c_constant(c_form)
        M = form.weight
        lam2 = lambda_squares(form, M)[1:]
        terms = [lam2[n - 1] * weight_V_holo_asymptotic(n, form.weight, C) / math.sqrt(n) for n in range(1, M + 1)]
        return AfeValue(stable_sum(terms), M, math.nan)
    rule = holo_rule(contour, form.weight)
    constants = _holo_constants(kernel_V_holo, form.weight, contour, 1.0, 0.5, rule.sigma, 1)
    M, tail = certified_truncation(constants, 1.0, 0.5, tol, multiplier * form.weight / 2)
    lam2 = lambda_squares(form, M)[1:]
    kernel = kernel_V_holo(rule.nodes, form.weight, contour, zeta_on_rule(rule, 1, 2))
    weights = weight_table(kernel, rule, np.arange(1, M + 1))
    value = stable_sum((lam2 * weights / np.sqrt(np.arange(1, M + 1))).tolist())
    return AfeValue(value, M, tail)


def l_half_sym2_holo(form, variant=Sym2Variant.exactContour, contour=None):
    return l_half_sym2_holo_detail(form, variant, contour).value


def sym2_weight_gap(weight, n=1, contour=None, c_form=CConstantForm.derived):
    """V_{4k}(n) from the contour minus log(4k/n) + C"""
    contour = _holo_contour(contour)
    return weight_V_holo(n, weight, contour) - weight_V_holo_asymptotic(n, weight, c_constant(c_form))


@dataclass
class CConstantReport:
    printed: float
    derived: float
    difference: float
    residuals: dict = field(default_factory=dict)  # weight -> (|gap printed|, |gap derived|)
    reconciles: CConstantForm = CConstantForm.derived


def c_constant_candidates(weights=MOMENT_WEIGHTS, contour=None):
    """both printed forms of C and which one the exact-contour weight at n = 1 approaches"""
    printed = c_constant(CConstantForm.printed)
    derived = c_constant(CConstantForm.derived)
    report = CConstantReport(printed, derived, printed - derived)
    for weight in weights:
        gap = sym2_weight_gap(weight, 1, contour, CConstantForm.derived)
        report.residuals[weight] = (abs(gap + derived - printed), abs(gap))
    last = report.residuals[weights[-1]]
    report.reconciles = CConstantForm.derived if last[1] < last[0] else CConstantForm.printed
    if report.reconciles == CConstantForm.printed:
        logger.warning('printed form of C reconciles the contour weights; derived form does not')
    return report


def l_one_sym2_detail(form, contour=None, tol=DEFAULT_TAIL_TOL, multiplier=1.0):
    """L(1, sym²f) = Σ λ(n²)/n V_a(n) + Σ λ(n²) V_b(n), both from the contour"""
    contour = _holo_contour(contour)
    weight = form.weight
    head_rule = holo_rule(contour, weight)
    dual_rule = holo_rule(contour, weight, sigma=1.5)
    head_constants = _holo_constants(kernel_L1_head, weight, contour, 1.0, 1.0, head_rule.sigma, 2)
    dual_constants = _holo_constants(kernel_L1_dual, weight, contour, 1.0, 0.0, dual_rule.sigma, 0)
    start = multiplier * weight / 2
    m_head, tail_head = certified_truncation(head_constants, 1.0, 1.0, tol / 2, start)
    m_dual, tail_dual = certified_truncation(dual_constants, 1.0, 0.0, tol / 2, start)
    M = max(m_head, m_dual)
    lam2 = lambda_squares(form, M)[1:]
    ns = np.arange(1, M + 1)
    head = weight_table(kernel_L1_head(head_rule.nodes, weight, contour, zeta_on_rule(head_rule, 2, 2)),
                        head_rule, ns[:m_head])
    dual = weight_table(kernel_L1_dual(dual_rule.nodes, weight, contour, zeta_on_rule(dual_rule, 0, 2)),
                        dual_rule, ns[:m_dual])
    value = stable_sum((lam2[:m_head] * head / ns[:m_head]).tolist() + (lam2[:m_dual] * dual).tolist())
    logger.debug('L(1, sym² f_%d) = %.12g from %d + %d terms', weight, value, m_head, m_dual)
    return AfeValue(value, M, tail_head + tail_dual)


def l_one_sym2(form, contour=None):
    return l_one_sym2_detail(form, contour).value


def harmonic_weight(form, contour=None):
    """w_f = 2π² / ((w - 1) L(1, sym² f))"""
    return 2 * math.pi ** 2 / ((form.weight - 1) * l_one_sym2(form, contour))
