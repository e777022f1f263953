import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from mpmath import mp

from src.const import WINDOW_WIDTH_FACTOR
from src.errors import KernelRangeError
from src.types import KernelShape, PhaseFunction

logger = logging.getLogger(__name__)

VECTOR_CHUNK = 256


def h_weight(t, window):
    """h_{T,Δ}(t) = exp(-(t-T)²/Δ²) + exp(-(t+T)²/Δ²)"""
    T, D = window.T, window.Delta
    if isinstance(t, np.ndarray):
        return np.exp(-((t - T) / D) ** 2) + np.exp(-((t + T) / D) ** 2)
    if isinstance(t, (mp.mpf, mp.mpc)):
        return mp.exp(-((t - T) / D) ** 2) + mp.exp(-((t + T) / D) ** 2)
    return math.exp(-((t - T) / D) ** 2) + math.exp(-((t + T) / D) ** 2)


def window_halfwidth(window, abs_tol, factor=WINDOW_WIDTH_FACTOR):
    """κ Δ √log(1/abs_tol): beyond it h_{T,Δ} is below abs_tol^(κ²)"""
    return factor * window.Delta * math.sqrt(math.log(1 / abs_tol))


def t_window(window, abs_tol, factor=WINDOW_WIDTH_FACTOR):
    w = window_halfwidth(window, abs_tol, factor)
    return max(0.0, window.T - w), window.T + w


def gaussian_tail(window, w):
    """∫_{|t-T|>w} t e^{-(t-T)²/Δ²} dt for t > 0, an upper bound on the neglected window mass"""
    D = window.Delta
    return D * (window.T * math.sqrt(math.pi) * math.erfc(w / D) + D * math.exp(-(w / D) ** 2))


@dataclass(frozen=True)
class KernelFn:
    shape: KernelShape
    fn: Callable
    lo: float = 0.0
    hi: float = math.inf
    params: dict = field(default_factory=dict)
    vfn: Optional[Callable] = None

    def __call__(self, x):
        if not self.lo <= x <= self.hi:
            raise KernelRangeError('%s kernel certified on [%g, %g], got x = %g'
                                   % (self.shape.name, self.lo, self.hi, x))
        return self.fn(x)

    def covers(self, x):
        return self.lo <= x <= self.hi

    def values(self, xs):
        """the kernel on an array of arguments, vectorized when the kernel provides it"""
        xs = np.asarray(xs, dtype=float)
        if xs.size and not (self.covers(float(xs.min())) and self.covers(float(xs.max()))):
            raise KernelRangeError('%s kernel certified on [%g, %g], got [%g, %g]'
                                   % (self.shape.name, self.lo, self.hi, xs.min(), xs.max()))
        if self.vfn is not None:
            return self.vfn(xs)
        return np.vectorize(self.fn, otypes=[float])(xs)


_PHASES = {
    PhaseFunction.cosh: np.cosh,
    PhaseFunction.sinh: np.sinh,
    PhaseFunction.cos: np.cos,
    PhaseFunction.sin: np.sin,
}


def _phase_modulated(T, Delta, phase, sign, nodes):
    # H_0(x) = ΔT ∫ e(x φ(v)/2π + vT/π) g(Δv) dv with g(y) = exp(-y²)
    reach = 8.0 / Delta
    v = np.linspace(-reach, reach, nodes)
    dv = v[1] - v[0]
    phi = sign * _PHASES[phase](v)
    g = np.exp(-(Delta * v) ** 2)
    keep = g > 1e-18
    phi, carrier = phi[keep], np.exp(2j * v[keep] * T) * g[keep]

    def fn(x):
        return float(Delta * T * np.real(np.sum(np.exp(1j * x * phi) * carrier)) * dv)

    def vfn(xs):
        flat = xs.ravel()
        out = np.empty(flat.shape)
        for start in range(0, flat.size, VECTOR_CHUNK):
            part = flat[start:start + VECTOR_CHUNK]
            out[start:start + VECTOR_CHUNK] = np.real(np.exp(1j * part[:, None] * phi[None, :]) @ carrier)
        return (Delta * T * dv * out).reshape(xs.shape)
    return fn, vfn


def synthetic_kernel(shape, center=10.0, width=2.0, T=10.0, Delta=2.0, phase=PhaseFunction.sinh, sign=1,
                     nodes=4001, hi=math.inf):
    """smooth rapidly decaying test kernels independent of the Bessel machinery"""
    if shape == KernelShape.gaussian:
        if width <= 0:
            raise ValueError('width must be positive')

        def fn(x):
            return math.exp(-((x - center) / width) ** 2)

        def vfn(xs):
            return np.exp(-((xs - center) / width) ** 2)
        return KernelFn(shape, fn, 0.0, hi, {'center': center, 'width': width}, vfn)
    if shape == KernelShape.phaseModulated:
        if sign not in (1, -1):
            raise ValueError('sign must be +1 or -1')
        fn, vfn = _phase_modulated(T, Delta, phase, sign, nodes)
        return KernelFn(shape, fn, 0.0, hi, {'T': T, 'Delta': Delta, 'phase': phase.name, 'sign': sign}, vfn)
    raise ValueError('%s is not a synthetic kernel shape' % shape.name)
