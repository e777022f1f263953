"""Kuznetsov side: the right-hand side for h_{T,Δ} and the continuous-spectrum term.

    ½ δ(m, n) H + ½ Σ_± Σ_c S(n, ±m; c)/c H±(4π √(mn) / c),   H = (2/π) ∫_0^∞ h(t) tanh(πt) t dt

The left-hand side needs Maass eigendata and is not assembled; reports carry the
right-hand side with its term breakdown only.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from src.arithmetic.kloosterman import kloosterman
from src.const import DEFAULT_C_MAX, DEFAULT_OMEGA
from src.errors import NonConvergenceError
from src.specialfn.quadrature import PrecisionPolicy, QuadratureSpec, panels, policy_or_default, quad_interval
from src.specialfn.zeta import zeta
from src.tracecheck.report import MomentReport
from src.transforms.bessel_transforms import DESK_T_MAX, kernel_fn
from src.transforms.kernels import h_weight, t_window
from src.types import KernelShape, OmegaConvention, Sign

logger = logging.getLogger(__name__)

RHS_M_MAX = 1000
CONTINUOUS_T_MAX = 1000.0
CONTINUOUS_WINDOW_TOL = 1e-12
CONTINUOUS_NODES = 12
CONTINUOUS_REL_TOL = 1e-6
CONTINUOUS_PREC = PrecisionPolicy(64, 16)


def kuznetsov_H(window, quad=None, prec=None):
    """H = (2/π) ∫_0^∞ h(t) tanh(πt) t dt"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    _, hi = t_window(window, quad.abs_tol ** 2)
    # the second Gaussian of h sits at t = -T; [0, lo] only carries its tail
    points = panels(0.0, hi, window.Delta)
    with mp.workprec(prec.total_bits):
        value, _ = quad_interval(lambda t: h_weight(t, window) * mp.tanh(mp.pi * t) * t, points, quad, prec)
        return float(2 / mp.pi * value)


def kuznetsov_rhs(window, m, n, c_max=DEFAULT_C_MAX, quad=None, prec=None):
    """MomentReport with lhs None: the diagonal, H and every per-(sign, c) Kloosterman term"""
    if not 1 <= m <= RHS_M_MAX or not 1 <= n <= RHS_M_MAX:
        raise ValueError('m and n must lie in 1..%d' % RHS_M_MAX)
    if c_max < 1:
        raise ValueError('c_max must be >= 1')
    if window.T > DESK_T_MAX:
        logger.warning('Kuznetsov right-hand side at T = %g beyond the desk scale', window.T)
    H = kuznetsov_H(window, quad, prec)
    diagonal = H / 2 if m == n else 0.0
    terms = {'H': H, 'diagonal': diagonal}
    per_c = []
    for sign, shape in ((Sign.plus, KernelShape.hPlus), (Sign.minus, KernelShape.hMinus)):
        kernel = kernel_fn(shape, window, quad, prec)
        for c in range(1, c_max + 1):
            # KernelRangeError from outside the certified range propagates
            value = kloosterman(n, int(sign) * m, c) / c * kernel(4 * math.pi * math.sqrt(m * n) / c) / 2
            terms['%s c=%d' % (sign.name, c)] = value
            per_c.append((c, value))
    kloost = math.fsum(v for _, v in per_c)
    total = diagonal + kloost
    last = abs(math.fsum(v for c, v in per_c if c == c_max))
    terms['kloosterman'] = kloost
    terms['last_c'] = last
    logger.info('Kuznetsov RHS (T=%g, Delta=%g, m=%d, n=%d, c<=%d): %.12g, last c contributes %.3g',
                window.T, window.Delta, m, n, c_max, total, last)
    return MomentReport(None, total, terms, {}, 0.0, ('rhs-only',))


# --- continuous spectrum

def omega(t, convention=DEFAULT_OMEGA, prec=CONTINUOUS_PREC):
    """the continuous-spectrum weight: 2π/|ζ(1+2it)|² or 1"""
    if convention == OmegaConvention.unit:
        return 1.0
    return float(2 * mp.pi / abs(zeta(mp.mpc(1, 2 * t), prec)) ** 2)


def _zeta_abs2(s, prec):
    return float(abs(zeta(s, prec)) ** 2)


def continuous_integrand(t, window, convention=DEFAULT_OMEGA, prec=CONTINUOUS_PREC):
    """h(t) ω(t) ζ(1/2) |ζ(1/2+it) ζ(1/2+2it)|²"""
    z_half = float(zeta(0.5, prec))
    return (h_weight(float(t), window) * omega(t, convention, prec) * z_half
            * _zeta_abs2(mp.mpc(0.5, t), prec) * _zeta_abs2(mp.mpc(0.5, 2 * t), prec))


@dataclass(frozen=True)
class ContinuousSpectrum:
    value: float
    cauchy_schwarz_bound: float
    convention: OmegaConvention
    nodes: int
    estimate: float

    @property
    def flag(self):
        return 'omega=%s' % self.convention.name


def _gauss_rule(lo, hi, degree):
    x, w = np.polynomial.legendre.leggauss(degree)
    points = panels(lo, hi, 1.0)
    ts, ws = [], []
    for a, b in zip(points[:-1], points[1:]):
        ts.append(a + (b - a) * (x + 1) / 2)
        ws.append(w * (b - a) / 2)
    return np.concatenate(ts), np.concatenate(ws)


def _continuous_sums(window, convention, degree, prec):
    lo, hi = t_window(window, CONTINUOUS_WINDOW_TOL)
    # below lo both Gaussians of h are under the window tolerance
    ts, ws = _gauss_rule(lo, hi, degree)
    z_half = float(zeta(0.5, prec))
    h = h_weight(ts, window)
    z1 = np.array([_zeta_abs2(mp.mpc(0.5, t), prec) for t in ts])
    z2 = np.array([_zeta_abs2(mp.mpc(0.5, 2 * t), prec) for t in ts])
    om = np.array([omega(t, convention, prec) for t in ts])
    # integrands are even: ∫_R = 2 ∫_0^∞
    value = 2 * math.fsum((ws * h * om * z1 * z2).tolist()) * z_half / (4 * math.pi)
    fourth1 = 2 * math.fsum((ws * h * z1 * z1).tolist())
    fourth2 = 2 * math.fsum((ws * h * z2 * z2).tolist())
    sup = float(np.max(np.abs(om))) * abs(z_half)
    bound = math.sqrt(fourth1 * fourth2) * sup / (4 * math.pi)
    return value, bound, len(ts)


def continuous_spectrum_detail(window, convention=DEFAULT_OMEGA, degree=CONTINUOUS_NODES, prec=CONTINUOUS_PREC):
    """(1/4π) ∫ h(t) ω(t) ζ(1/2) |ζ(1/2+it) ζ(1/2+2it)|² dt on Gauss-Legendre panels at two degrees"""
    if window.T > CONTINUOUS_T_MAX:
        raise ValueError('T = %g beyond the desk scale T <= %g' % (window.T, CONTINUOUS_T_MAX))
    value, _, _ = _continuous_sums(window, convention, degree, prec)
    fine, fine_bound, fine_count = _continuous_sums(window, convention, 2 * degree, prec)
    estimate = abs(fine - value)
    if estimate > CONTINUOUS_REL_TOL * abs(fine):
        raise NonConvergenceError('continuous spectrum term moved by %.3g on refinement' % estimate, estimate=estimate)
    logger.info('continuous spectrum (T=%g, Delta=%g, omega=%s): %.10g, Cauchy-Schwarz bound %.6g',
                window.T, window.Delta, convention.name, fine, fine_bound)
    return ContinuousSpectrum(fine, fine_bound, OmegaConvention(convention), fine_count, estimate)


def continuous_spectrum_term(window, convention=DEFAULT_OMEGA):
    return continuous_spectrum_detail(window, convention).value
