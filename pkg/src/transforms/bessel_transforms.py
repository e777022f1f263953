"""Kuznetsov transforms H⁺, H⁻ of h_{T,Δ} and the Petersson weight transform H_holo.

    H⁺(x) = 2i ∫ J_{2it}(x) h(t) t / cosh(πt) dt
    H⁻(x) = (4/π) ∫ K_{2it}(x) sinh(πt) h(t) t dt
    H_holo(x) = Σ_k h((4k - K - 1)/Δ) J_{4k-1}(x)

For real x, J_{-2it}(x) is the conjugate of J_{2it}(x), so H⁺ folds to
-4 ∫_0^∞ Im J_{2it}(x) t h(t)/cosh(πt) dt. H⁻ uses the identity
K_{2it}(x) sinh(πt) = -π Im I_{2it}(x) / (2 cosh(πt)) while x < πt, and
log|K| + log sinh(πt) once the K integral is well conditioned.
"""
import logging
import math

import numpy as np
from mpmath import mp

from src.const import H_MINUS_MAGNITUDE_CONSTANT, H_PLUS_MAGNITUDE_CONSTANT, WINDOW_WIDTH_FACTOR
from src.errors import NonConvergenceError
from src.specialfn.bessel import bessel_i_imag_scaled, bessel_j, bessel_j_imag, log_abs_bessel_k_imag
from src.specialfn.quadrature import PrecisionPolicy, QuadratureSpec, panels, policy_or_default, quad_interval
from src.transforms.kernels import KernelFn, gaussian_tail, h_weight, t_window, window_halfwidth
from src.types import KernelShape, Regime

logger = logging.getLogger(__name__)

DESK_X_MAX = 500.0
DESK_T_MAX = 50.0
T_PANEL = 1.0
BUMP_NODES = 2000
FOURIER_REACH = 160.0


def _window_panels(window, quad, factor):
    lo, hi = t_window(window, quad.abs_tol, factor)
    return panels(lo, hi, T_PANEL)


def _check_desk(x, window):
    if x <= 0:
        raise ValueError('x must be positive')
    if window.T > DESK_T_MAX:
        logger.warning('T = %g beyond the desk scale T <= %g', window.T, DESK_T_MAX)


def H_plus(x, window, quad=None, prec=None, factor=WINDOW_WIDTH_FACTOR):
    """H⁺(x) from the folded integral over the positive window"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    _check_desk(x, window)
    prec.require(1.5 * float(x), 'H_plus(%s)' % x)

    def integrand(t):
        if t == 0:
            return mp.zero
        return mp.im(bessel_j_imag(t, x, prec)) * t * h_weight(t, window) / mp.cosh(mp.pi * t)

    value, err = quad_interval(integrand, _window_panels(window, quad, factor), quad, prec)
    logger.debug('H+(%g): %.12g (quad err %.3g)', x, float(-4 * value), float(4 * err))
    return float(-4 * value)


def H_plus_complex(x, window, quad=None, prec=None, factor=WINDOW_WIDTH_FACTOR):
    """2i ∫ over both windows t ≈ ±T without folding; the imaginary part measures realness"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    _check_desk(x, window)
    prec.require(1.5 * float(x), 'H_plus(%s)' % x)
    right = _window_panels(window, quad, factor)
    left = [-p for p in reversed(right)]

    def integrand(t):
        return bessel_j_imag(t, x, prec) * t * h_weight(t, window) / mp.cosh(mp.pi * t)

    total = mp.mpc(0)
    for points in (left, right):
        value, _ = quad_interval(integrand, points, quad, prec)
        total += value
    total *= 2j
    return complex(total)


def H_plus_tail_bound(window, quad=None, factor=WINDOW_WIDTH_FACTOR):
    quad = quad or QuadratureSpec()
    return 4 * gaussian_tail(window, window_halfwidth(window, quad.abs_tol, factor))


def _fused_minus(t, x, prec, quad=None):
    """K_{2it}(x) sinh(πt), never forming either factor on its own scale"""
    if t == 0:
        return mp.zero
    if x >= math.pi * abs(float(t)):
        log_k, sign = log_abs_bessel_k_imag(t, x, prec, quad)
        if sign == 0:
            return mp.zero
        log_sinh = mp.pi * t + mp.log1p(-mp.exp(-2 * mp.pi * t)) - mp.log(2)
        return sign * mp.exp(log_k + log_sinh)
    return -mp.pi * mp.im(bessel_i_imag_scaled(t, x, prec)) / 2


def H_minus(x, window, quad=None, prec=None, factor=WINDOW_WIDTH_FACTOR):
    """H⁻(x) = (8/π) ∫_0^∞ K_{2it}(x) sinh(πt) h(t) t dt"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    _check_desk(x, window)
    lo, hi = t_window(window, quad.abs_tol, factor)
    if x < math.pi * hi:
        prec.require(1.5 * float(x), 'H_minus(%s)' % x)

    def integrand(t):
        return _fused_minus(t, x, prec, quad) * t * h_weight(t, window)

    value, err = quad_interval(integrand, panels(lo, hi, T_PANEL), quad, prec)
    logger.debug('H-(%g): %.12g (quad err %.3g)', x, float(8 / mp.pi * value), float(err))
    return float(8 / mp.pi * value)


def _sinh_gaussian_moment(u, window):
    """∫_R cos(2tu) sinh(πt) t h(t) dt for Gaussian h, in closed form"""
    T, D = mp.mpf(window.T), mp.mpf(window.Delta)
    total = mp.mpc(0)
    for center in (T, -T):
        for beta, sign in ((mp.pi + 2j * u, 1), (mp.pi - 2j * u, 1), (-mp.pi + 2j * u, -1), (-mp.pi - 2j * u, -1)):
            total += sign * mp.exp(beta * center + beta * beta * D * D / 4) * (center + beta * D * D / 2)
    return mp.re(total) * mp.sqrt(mp.pi) * D / 4


def H_minus_nested(x, window, quad=None, prec=None):
    """H⁻ from K_{2it}(x) = ∫_0^∞ e^{-x cosh u} cos(2tu) du with the t-integral done exactly"""
    quad = quad or QuadratureSpec()
    T, D = window.T, window.Delta
    peak = math.pi * T + (math.pi * D) ** 2 / 4
    # the u-integrand reaches e^{peak - x} before cancelling down to H⁻ = O(T)
    prec = policy_or_default(prec).scaled(max(0.0, peak - x) / math.log(2) + 40)
    top = math.sqrt((peak + 60) / D ** 2)
    width = math.pi / (2 * T + math.pi * D * D + 1)

    def integrand(u):
        return mp.exp(-x * mp.cosh(u)) * _sinh_gaussian_moment(u, window)

    value, _ = quad_interval(integrand, panels(0, top, width), quad, prec)
    return float(4 / mp.pi * value)


def H_holo_terms(x, wwindow, extra=0, prec=None):
    """[(k, h_k J_{4k-1}(x))] over the window's k, plus `extra` k on each side"""
    ks = wwindow.ks()
    if not ks:
        return []
    ks = range(max(1, ks[0] - extra), ks[-1] + extra + 1)
    return [(k, wwindow.h_k(k) * float(bessel_j(4 * k - 1, x, prec))) for k in ks]


def H_holo(x, wwindow, prec=None):
    if x < 0:
        raise ValueError('x must be >= 0')
    if x == 0:
        return 0.0
    return math.fsum(v for _, v in H_holo_terms(x, wwindow, prec=prec))


def bump_fourier(xis, wwindow):
    """ĥ(ξ) = ∫ h(z) e(-zξ) dz by the trapezoid rule (h and all derivatives vanish at ±r)"""
    r = wwindow.radius
    z = np.linspace(-r, r, BUMP_NODES + 1)
    hz = wwindow.h(z)
    dz = z[1] - z[0]
    xis = np.asarray(xis, dtype=float)
    out = np.empty(len(xis), dtype=complex)
    for start in range(0, len(xis), 512):
        block = xis[start:start + 512]
        out[start:start + 512] = np.exp(-2j * np.pi * np.outer(block, z)) @ hz * dz
    return out


def H_holo_integral(x, wwindow):
    """¼ ∫ ħ(t) c(t) dt with ħ(t) = Δ e(tK) ĥ(-Δt) and c(t) = -2i sin(x sin 2πt) - 2 sin(x cos 2πt)

    c picks the orders n ≡ 3 (mod 4) = 4k - 1 out of Σ_n h((n-K)/Δ) J_n(x).
    """
    if x == 0:
        return 0.0
    K, D = wwindow.K, wwindow.Delta
    reach = FOURIER_REACH / D
    step = 1.0 / (4 * (K + D * wwindow.radius + x + 10))
    count = int(math.ceil(reach / step))
    t = step * np.arange(-count, count + 1)
    hbar = D * np.exp(2j * np.pi * t * K) * bump_fourier(-D * t, wwindow)
    c = -2j * np.sin(x * np.sin(2 * np.pi * t)) - 2 * np.sin(x * np.cos(2 * np.pi * t))
    value = 0.25 * np.sum(hbar * c) * step
    if abs(value.imag) > 1e-8 * max(1.0, abs(value.real)):
        raise NonConvergenceError('H_holo integral route not real: %.3g' % value.imag, estimate=abs(value.imag))
    return float(value.real)


def plus_regime(x, window):
    """negligible for x <= ΔT/10, magnitude regime for x >= 10ΔT, transition between"""
    scale = window.Delta * window.T
    if x <= scale / 10:
        return Regime.negligible
    if x >= 10 * scale:
        return Regime.plus
    return None


def plus_magnitude_scale(x, window):
    """T Δ x^{-1/2}"""
    return window.T * window.Delta / math.sqrt(x)


def transition_scan(xs, window, quad=None, prec=None):
    """[(x, |H⁺(x)|, |H⁺(x)| / (TΔ x^{-1/2}))] on the desk-scale part of xs"""
    rows = []
    for x in xs:
        if x > DESK_X_MAX:
            logger.info('x = %g beyond desk scale; recording the analytic scale only', x)
            rows.append((x, math.nan, math.nan))
            continue
        value = abs(H_plus(x, window, quad, _desk_policy(x, prec)))
        rows.append((x, value, value / plus_magnitude_scale(x, window)))
    return rows


def kernel_fn(shape, window, quad=None, prec=None):
    """KernelFn for H⁺, H⁻ or H_holo; the window is where the evaluation is certified"""
    prec = policy_or_default(prec)
    if shape == KernelShape.hPlus:
        hi = min(DESK_X_MAX, (prec.working_bits - prec.series_guard_bits) / 1.5)
        params = {'T': window.T, 'Delta': window.Delta}
        return KernelFn(shape, lambda x: H_plus(x, window, quad, prec), 1e-12, hi, params)
    if shape == KernelShape.hMinus:
        return KernelFn(shape, lambda x: H_minus(x, window, quad, prec), 1e-12, 10 * DESK_X_MAX,
                        {'T': window.T, 'Delta': window.Delta})
    if shape == KernelShape.hHolo:
        return KernelFn(shape, lambda x: H_holo(x, window, prec), 0.0, math.inf,
                        {'K': window.K, 'Delta': window.Delta})
    raise ValueError('%s is not a Bessel transform' % shape.name)


def _desk_policy(x, prec):
    policy = policy_or_default(prec)
    need = int(1.5 * x) + policy.series_guard_bits + 64
    if policy.working_bits < need:
        policy = PrecisionPolicy(need, policy.series_guard_bits)
    return policy


def plus_decay_probe(window, x=None, quad=None, prec=None):
    """(|H⁺(x)|, TΔ(10ΔT)^{-1/2}, ratio) for x in the negligible regime, default ΔT/10"""
    x = x if x is not None else window.Delta * window.T / 10
    value = abs(H_plus(x, window, quad, _desk_policy(x, prec)))
    peak = plus_magnitude_scale(10 * window.Delta * window.T, window)
    return value, peak, value / peak


def minus_decay_probe(window, x, quad=None, prec=None):
    """(|H⁻(x)|, |H⁻(2T)|, ratio); 2T is where the K-turning point meets the window centre"""
    value = abs(H_minus(x, window, quad, _desk_policy(x, prec) if x < math.pi * 2 * window.T else prec))
    peak = abs(H_minus(2 * window.T, window, quad, _desk_policy(2 * window.T, prec)))
    return value, peak, value / peak


def probe_rows(kind, xs, window, quad=None, prec=None):
    """[(x, value, value / bound)] for `transforms probe`

    bounds: c TΔ x^{-1/2} for H⁺, c T^{1.1} for H⁻, the number of contributing k for H_holo.
    """
    rows = []
    for x in xs:
        if kind == KernelShape.hPlus:
            value = H_plus(x, window, quad, _desk_policy(x, prec))
            bound = H_PLUS_MAGNITUDE_CONSTANT * plus_magnitude_scale(x, window)
        elif kind == KernelShape.hMinus:
            policy = _desk_policy(x, prec) if x < math.pi * DESK_T_MAX * 2 else prec
            value = H_minus(x, window, quad, policy)
            bound = H_MINUS_MAGNITUDE_CONSTANT * window.T ** 1.1
        elif kind == KernelShape.hHolo:
            value = H_holo(x, window, prec)
            bound = max(1, len(window.ks()))
        else:
            raise ValueError('%s is not a Bessel transform' % kind.name)
        logger.info('%s(%g) = %.6g', kind.name, x, value)
        rows.append((x, value, abs(value) / bound))
    return rows
