"""The analytic side of the off-diagonal dual sum.

    W±(x1, x2; c) = ∫∫ H(4π √t1 t2 / c) w_M(t1/M) w_N(t2/N) e(-(x1 t1 + x2 t2)/c) dt1 dt2
    Υ(u)          = ∫ w_M(u/(M t²)) w_N(t/N) e(-x1 u/(c t²) - x2 t/c) dt / t²

so that W = ∫ H(4π √u / c) Υ(u) du with u = t1 t2². The integrand of W is smooth and
vanishes with all derivatives at the ends of the block, so the tensor trapezoid rule on
the support converges faster than any power of the step.
"""
import logging
import math

import numpy as np
from mpmath import mp
from scipy import integrate

from src.const import GRID_NODES_MAX
from src.errors import NonConvergenceError, StationaryPointError
from src.offdiag.block import block_bump
from src.specialfn.quadrature import QuadratureSpec, panels, policy_or_default, quad_interval

logger = logging.getLogger(__name__)

START_NODES = 128
ROOT_SAMPLES = 512
CURVATURE_FLOOR = 1e-12


def kernel_grid(block, c, kernel, n1, n2):
    """(t1, t2, F, h1, h2): the W integrand without its phase on an n1 x n2 tensor grid"""
    (a1, b1), (a2, b2) = block.m_support(), block.n_support()
    t1 = np.linspace(a1, b1, n1)
    t2 = np.linspace(a2, b2, n2)
    x = 4 * math.pi * np.sqrt(t1)[:, None] * t2[None, :] / c
    F = kernel.values(x) * block.w_M(t1)[:, None] * block.w_N(t2)[None, :]
    return t1, t2, F, t1[1] - t1[0], t2[1] - t2[0]


def dual_transform(grid, c, x1s, x2s):
    """W(x1, x2; c) for every pair from one tensor grid, as a len(x1s) x len(x2s) array"""
    t1, t2, F, h1, h2 = grid
    e1 = np.exp(-2j * np.pi * np.outer(np.asarray(x1s, dtype=float), t1) / c)
    e2 = np.exp(-2j * np.pi * np.outer(np.asarray(x2s, dtype=float), t2) / c)
    return h1 * h2 * (e1 @ F @ e2.T)


def w_pm_integral(x1, x2, c, kernel, block, quad=None):
    """W±(x1, x2; c), the grid doubled until successive values agree"""
    quad = quad or QuadratureSpec()
    n = START_NODES
    previous = None
    while n <= GRID_NODES_MAX:
        value = complex(dual_transform(kernel_grid(block, c, kernel, n, n), c, [x1], [x2])[0, 0])
        if previous is not None and abs(value - previous) <= quad.tolerance(abs(value)):
            logger.debug('W(%d, %d; %d) on %d^2 nodes: %s', x1, x2, c, n, value)
            return value
        previous = value
        n *= 2
    raise NonConvergenceError('W(%d, %d; %d) not settled on %d nodes' % (x1, x2, c, GRID_NODES_MAX),
                              estimate=abs(value - previous))


def kernel_mass(c, kernel, block, tol=1e-12):
    """∫∫ H(4π √t1 t2 / c) w_M w_N dt1 dt2 by scipy's adaptive cubature"""
    (a1, b1), (a2, b2) = block.m_support(), block.n_support()

    def f(t2, t1):
        return kernel(4 * math.pi * math.sqrt(t1) * t2 / c) * block.w_M(t1) * block.w_N(t2)
    value, err = integrate.dblquad(f, a1, b1, a2, b2, epsabs=tol, epsrel=tol)
    logger.debug('kernel mass at c = %d: %.15g (err %.3g)', c, value, err)
    return value


# --- Υ

def upsilon_support(u, block):
    """t-interval where both bumps of Υ(u) are nonzero, or None"""
    n_lo, n_hi = block.n_support()
    lo = max(n_lo, math.sqrt(u / (3 * block.M)))
    hi = min(n_hi, math.sqrt(2 * u / block.M))
    return (lo, hi) if lo < hi else None


def upsilon_phase(x1, x2, c, u):
    """the phase of Υ in radians"""
    return lambda t: 2 * mp.pi * (-x1 * u / (c * t * t) - x2 * t / c)


def upsilon_weight(u, block):
    return lambda t: block_bump(u / (block.M * t * t)) * block_bump(t / block.N) / (t * t)


def upsilon_direct(x1, x2, c, u, block, quad=None, prec=None):
    """Υ_{x1,x2;c}(u) by adaptive quadrature over panels of about one oscillation"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    support = upsilon_support(u, block)
    if support is None:
        return 0j
    lo, hi = support
    # |φ'| is largest at the left end
    slope = 2 * math.pi * (2 * abs(x1) * u / (c * lo ** 3) + abs(x2) / c)
    width = min((hi - lo) / 4, 2 * math.pi / slope) if slope > 0 else (hi - lo) / 4
    phase, weight = upsilon_phase(x1, x2, c, u), upsilon_weight(u, block)
    with mp.workprec(prec.total_bits):
        value, _ = quad_interval(lambda t: weight(t) * mp.expj(phase(t)), panels(lo, hi, width), quad, prec)
    return complex(value)


def upsilon_prefactor(x1, x2, c, block):
    """c^{1/2} x1^{1/6} M^{1/6} / (x2^{2/3} N^{5/3}), the stationary-case size of Υ"""
    return (math.sqrt(c) * abs(x1) ** (1 / 6) * block.M ** (1 / 6)
            / (abs(x2) ** (2 / 3) * block.N ** (5 / 3)))


def stationary_phase_oracle(phase, weight, t_range, samples=ROOT_SAMPLES, prec=None):
    """√(2π/|φ''(t0)|) w(t0) e^{i(φ(t0) + sgn φ''(t0) π/4)} at the unique stationary point

    phase and weight take mpmath numbers; phase is in radians.
    """
    prec = policy_or_default(prec)
    lo, hi = t_range
    with mp.workprec(prec.total_bits):
        ts = mp.linspace(lo, hi, samples)
        d1 = [mp.diff(phase, t) for t in ts]
        brackets = [(ts[i], ts[i + 1]) for i in range(samples - 1) if d1[i] == 0 or d1[i] * d1[i + 1] < 0]
        if not brackets:
            raise StationaryPointError('no stationary point on [%g, %g]' % (lo, hi))
        if len(brackets) > 1:
            raise StationaryPointError('%d stationary points on [%g, %g]' % (len(brackets), lo, hi))
        a, b = brackets[0]
        t0 = a if d1[ts.index(a)] == 0 else mp.findroot(lambda t: mp.diff(phase, t), (a, b), solver='illinois')
        d2 = mp.diff(phase, t0, 2)
        if abs(d2) < CURVATURE_FLOOR:
            raise StationaryPointError('degenerate stationary point at t = %s' % mp.nstr(t0, 10))
        value = mp.sqrt(2 * mp.pi / abs(d2)) * weight(t0) * mp.expj(phase(t0) + mp.sign(d2) * mp.pi / 4)
    logger.debug('stationary point t0 = %s, phi\'\' = %s', mp.nstr(t0, 12), mp.nstr(d2, 6))
    return complex(value)


def upsilon_oracle(x1, x2, c, u, block, prec=None):
    support = upsilon_support(u, block)
    if support is None:
        raise StationaryPointError('Υ(%g) has empty support' % u)
    return stationary_phase_oracle(upsilon_phase(x1, x2, c, u), upsilon_weight(u, block), support, prec=prec)


def upsilon_to_w(x1, x2, c, kernel, block, quad=None, prec=None):
    """W±(x1, x2; c) as ∫ H(4π√u/c) Υ(u) du, the u-integral over panels of the support"""
    quad = quad or QuadratureSpec()
    prec = policy_or_default(prec)
    (m_lo, m_hi), (n_lo, n_hi) = block.m_support(), block.n_support()
    u_lo, u_hi = m_lo * n_lo ** 2, m_hi * n_hi ** 2

    def integrand(u):
        inner = upsilon_direct(x1, x2, c, float(u), block, quad, prec)
        return kernel(4 * math.pi * math.sqrt(float(u)) / c) * mp.mpc(inner.real, inner.imag)

    with mp.workprec(prec.total_bits):
        value, _ = quad_interval(integrand, panels(u_lo, u_hi, (u_hi - u_lo) / 16), quad, prec)
    return complex(value)
