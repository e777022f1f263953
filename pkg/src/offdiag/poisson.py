"""The dyadic off-diagonal sum and its Poisson dual.

    S±(M, N; C) = Σ_c Σ_m Σ_n w_M(m/M) w_N(n/N) S(n², ±m; c)/c H(4π √m n / c)
                = Σ_c Σ_{x1, x2 ∈ Z} W±(x1, x2; c) G±(x1, x2; c)

The dual sum is cut at |x1| <= X1, |x2| <= X2 where the j-fold integration by parts
bound |W| <= (c/2π|x|)^j ||∂^j F||_1 certifies the remainder, with |G±| <= 1.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.arithmetic.gsum import g_closed_row
from src.arithmetic.kloosterman import kloosterman_table
from src.const import DUAL_X_MAX, GRID_NODES_MAX, IBP_ORDER, POISSON_TAIL_TOL
from src.errors import BudgetError, TruncationError
from src.offdiag.block import DyadicBlock, OscProbe, block_bump
from src.offdiag.oscillatory import dual_transform, kernel_grid, w_pm_integral
from src.specialfn.quadrature import QuadratureSpec
from src.specialfn.zeta import zeta
from src.transforms.kernels import synthetic_kernel
from src.types import KernelShape, PhaseFunction, Regime, Sign
from src.utils import parallel_map, stable_sum

logger = logging.getLogger(__name__)

INITIAL_NODES = 256
SPECTRAL_FLOOR = 1e-15
# share of the spectrum that must have decayed below the floor on a resolved grid
RESOLUTION_BAND = 0.1


def s_direct(block, sign, kernel, threads=1):
    """the (m, n, c) triple sum"""
    block.require_desk()
    ms, ns = block.ms(), block.ns()
    weights = block_bump(ns / block.N)[:, None] * block_bump(ms / block.M)[None, :]
    a_values, b_values = np.broadcast_arrays((ns * ns)[:, None], int(sign) * ms[None, :])

    def one(c):
        sums = kloosterman_table(a_values, b_values, c)
        h = kernel.values(4 * math.pi * np.sqrt(ms)[None, :] * ns[:, None] / c)
        return math.fsum((weights * sums * h).ravel().tolist()) / c

    value = stable_sum(parallel_map(one, block.cs(), threads))
    logger.debug('S%s direct (M=%g, N=%g, C=%g): %.15g', '+' if sign == Sign.plus else '-',
                 block.M, block.N, block.C, value)
    return complex(value)


# --- dual side

def _spectral_derivative(F, h, order, axis):
    n = F.shape[axis]
    size = 2 * n
    spectrum = np.fft.fft(F, n=size, axis=axis)
    spectrum[np.abs(spectrum) < SPECTRAL_FLOOR * np.abs(spectrum).max()] = 0
    freq = 2 * np.pi * np.fft.fftfreq(size, d=h)
    shape = [1, 1]
    shape[axis] = size
    out = np.fft.ifft(spectrum * (1j * freq.reshape(shape)) ** order, axis=axis)
    return np.take(out, np.arange(n), axis=axis)


def _resolved(F, axis):
    spectrum = np.abs(np.fft.rfft(F, axis=axis))
    profile = spectrum.max(axis=1 - axis)
    band = max(1, int(RESOLUTION_BAND * profile.size))
    return profile[-band:].max() <= SPECTRAL_FLOOR * 1e3 * profile.max()


@dataclass(frozen=True)
class DerivativeNorms:
    """||F||_1, ||∂1^j F||_1, ||∂2^j F||_1, ||∂1^j ∂2^j F||_1 on the block"""
    order: int
    f: float
    d1: float
    d2: float
    d12: float


def derivative_norms(grid, order=IBP_ORDER):
    _, _, F, h1, h2 = grid
    area = h1 * h2
    d1 = _spectral_derivative(F, h1, order, 0)
    d12 = _spectral_derivative(d1, h2, order, 1)
    d2 = _spectral_derivative(F, h2, order, 1)
    return DerivativeNorms(order, float(np.abs(F).sum() * area), float(np.abs(d1).sum() * area),
                           float(np.abs(d2).sum() * area), float(np.abs(d12).sum() * area))


def dual_tail_bound(norms, c, X1, X2):
    """bound on Σ |W| over the dual lattice outside |x1| <= X1, |x2| <= X2"""
    j = norms.order
    scale = (c / (2 * math.pi)) ** j
    z = 2 * float(zeta(j))
    b1, b2, b12 = scale * norms.d1, scale * norms.d2, scale * scale * norms.d12
    tail1 = 2 * X1 ** (1 - j) / (j - 1) * (b1 + z * b12)
    tail2 = 2 * X2 ** (1 - j) / (j - 1) * (b2 + z * b12)
    return tail1 + tail2


def _cutoff(norms, c, tol):
    j = norms.order
    scale = (c / (2 * math.pi)) ** j
    z = 2 * float(zeta(j))
    out = []
    for b in (scale * norms.d1, scale * norms.d2):
        k = 2 * (b + z * scale * scale * norms.d12) / (j - 1)
        out.append(max(1, math.ceil((2 * k / tol) ** (1 / (j - 1)))) if k > 0 else 1)
    return out


def _nodes(support, X, c):
    """nodes with 1/h >= (2X + 1)/c, so aliased frequencies land outside the box"""
    return max(INITIAL_NODES, math.ceil(support * (2 * X + 1) / c) + 1)


@dataclass(frozen=True)
class DualBox:
    c: int
    X1: int
    X2: int
    nodes: tuple
    value: complex
    tail_bound: float


@dataclass(frozen=True)
class DualSum:
    value: complex
    tail_bound: float
    boxes: tuple


def _dual_one(block, sign, kernel, c, tol, order, with_phase):
    n = INITIAL_NODES
    while True:
        grid = kernel_grid(block, c, kernel, n, n)
        if _resolved(grid[2], 0) and _resolved(grid[2], 1):
            break
        n *= 2
        if n > GRID_NODES_MAX:
            raise BudgetError('kernel not resolved on %d nodes at c = %d' % (GRID_NODES_MAX, c))
    norms = derivative_norms(grid, order)
    X1, X2 = _cutoff(norms, c, tol)
    if max(X1, X2) > DUAL_X_MAX:
        bound = dual_tail_bound(norms, c, min(X1, DUAL_X_MAX), min(X2, DUAL_X_MAX))
        raise TruncationError('dual box (%d, %d) at c = %d exceeds %d' % (X1, X2, c, DUAL_X_MAX), bound=bound)
    (a1, b1), (a2, b2) = block.m_support(), block.n_support()
    n1, n2 = max(n, _nodes(b1 - a1, X1, c)), max(n, _nodes(b2 - a2, X2, c))
    if max(n1, n2) > GRID_NODES_MAX:
        raise BudgetError('dual box at c = %d needs %d nodes' % (c, max(n1, n2)))
    if (n1, n2) != (n, n):
        grid = kernel_grid(block, c, kernel, n1, n2)
    x1s, x2s = np.arange(-X1, X1 + 1), np.arange(-X2, X2 + 1)
    W = dual_transform(grid, c, x1s, x2s)
    G = np.array([g_closed_row(int(x1), x2s, c, sign, with_phase) for x1 in x1s])
    value = stable_sum((W * G).ravel().tolist())
    # truncated tail plus the aliasing of the trapezoid rule, which the same bound controls
    bound = 2 * dual_tail_bound(norms, c, X1, X2)
    logger.debug('dual box c=%d: |x1| <= %d, |x2| <= %d on %dx%d nodes, tail <= %.3g', c, X1, X2, n1, n2, bound)
    return DualBox(c, X1, X2, (n1, n2), complex(value), bound)


def s_poisson_detail(block, sign, kernel, tol=POISSON_TAIL_TOL, order=IBP_ORDER, threads=1, with_phase=True):
    """DualSum of Σ_c Σ_{x1, x2} W G; with_phase=False drops e(±x1 x2²/4c) from G (a control)"""
    block.require_desk()
    cs = block.cs()
    share = tol / len(cs)
    boxes = parallel_map(lambda c: _dual_one(block, sign, kernel, c, share, order, with_phase), cs, threads)
    value = stable_sum([b.value for b in boxes])
    return DualSum(complex(value), math.fsum(b.tail_bound for b in boxes), tuple(boxes))


def s_poisson(block, sign, kernel, tol=POISSON_TAIL_TOL, threads=1):
    return s_poisson_detail(block, sign, kernel, tol, threads=threads).value


def poisson_report(block, sign, kernel, tol=POISSON_TAIL_TOL, threads=1):
    direct = s_direct(block, sign, kernel, threads)
    dual = s_poisson_detail(block, sign, kernel, tol, threads=threads)
    difference = abs(direct - dual.value)
    logger.info('Poisson (M=%g, N=%g, C=%g, %s): direct %.12g, dual %.12g, diff %.3g, tail <= %.3g',
                block.M, block.N, block.C, Sign(sign).name, direct.real, dual.value.real, difference, dual.tail_bound)
    return {
        'M': block.M, 'N': block.N, 'C': block.C, 'sign': Sign(sign).name, 'kernel': kernel.shape.name,
        'direct': [direct.real, direct.imag], 'poisson': [dual.value.real, dual.value.imag],
        'difference': difference, 'tail_bound': dual.tail_bound,
        'boxes': [{'c': b.c, 'X1': b.X1, 'X2': b.X2, 'tail_bound': b.tail_bound} for b in dual.boxes],
    }


def desk_kernels(block):
    """a wide gaussian over the block's argument range and a gently phase-modulated kernel"""
    lo, hi = block.x_range(block.cs()[-1])[0], block.x_range(block.cs()[0])[1]
    return [
        synthetic_kernel(KernelShape.gaussian, center=(lo + hi) / 2, width=hi - lo),
        synthetic_kernel(KernelShape.phaseModulated, T=10.0, Delta=100.0, phase=PhaseFunction.sin, nodes=161),
    ]


# --- regimes

def probe_kernel(window, x_max):
    """the cosh-phase H_0 kernel of the window, its v-rule fine enough to resolve x <= x_max"""
    reach = 6.4 / window.Delta
    top = x_max * math.sinh(reach) + 2 * window.T + 8 * window.Delta
    nodes = math.ceil(2 * (8.0 / window.Delta) * top / math.pi) + 1
    return synthetic_kernel(KernelShape.phaseModulated, T=window.T, Delta=window.Delta,
                            phase=PhaseFunction.cosh, sign=1, nodes=nodes)


@dataclass(frozen=True)
class RegimeReport:
    probe: OscProbe
    expected: Regime
    measured: float
    scale: float
    ratio: float
    u_plus: float
    u_minus: float


def regime_probe(probe, window, kernel=None, quad=None):
    """classify (X1, X2, C) and measure |W±(X1, X2; C)| against c M Δ / x2"""
    quad = quad or QuadratureSpec()
    block = DyadicBlock(probe.M, probe.N, probe.C)
    block.require_desk()
    x1, x2, c = int(round(probe.X1)), int(round(probe.X2)), int(round(probe.C))
    if kernel is None:
        kernel = probe_kernel(window, block.x_range(c)[1])
    measured = abs(w_pm_integral(x1, x2, c, kernel, block, quad))
    scale = c * probe.M * window.Delta / abs(x2)
    expected = probe.expected_regime(window)
    logger.info('probe (X1=%g, X2=%g, C=%g): expected %s, |W| = %.3g, |W|/(cMΔ/x2) = %.3g',
                probe.X1, probe.X2, probe.C, expected.name, measured, measured / scale)
    return RegimeReport(probe, expected, measured, scale, measured / scale,
                        probe.u_plus(window.T), probe.u_minus(window.T))
