"""Dyadic blocks of the off-diagonal sum and the (X1, X2, C) probes of its dual."""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from mpmath import mp

from src.const import DESK_BLOCK_MAX, DESK_C_MAX, EPS_POWER, REGIME_SLACK
from src.errors import BudgetError
from src.tracecheck.window import bump
from src.types import Regime, Sign

logger = logging.getLogger(__name__)

# w_M, w_N live on (1/2, 3)
SUPPORT = (0.5, 3.0)
_MID = (SUPPORT[0] + SUPPORT[1]) / 2
_RADIUS = (SUPPORT[1] - SUPPORT[0]) / 2
DERIVATIVE_ORDER = 6
DERIVATIVE_GRID = 400


def block_bump(x):
    """the fixed C^∞ bump on (1/2, 3), numpy or mpmath"""
    if isinstance(x, (mp.mpf, mp.mpc)):
        y = (x - _MID) / _RADIUS
        if abs(y) >= 1:
            return mp.zero
        return mp.exp(1 - 1 / (1 - y * y))
    return bump((np.asarray(x, dtype=float) - _MID) / _RADIUS)


@lru_cache(maxsize=1)
def bump_derivative_bounds(order=DERIVATIVE_ORDER):
    """sup over (1/2, 3) of |x^j w^{(j)}(x)| for j = 0..order, sampled on a fine grid"""
    with mp.workprec(96):
        xs = mp.linspace(SUPPORT[0], SUPPORT[1], DERIVATIVE_GRID)[1:-1]
        best = [mp.zero] * (order + 1)
        for x in xs:
            for j, d in enumerate(mp.taylor(block_bump, x, order)):
                best[j] = max(best[j], abs(x ** j * d * mp.factorial(j)))
    return tuple(float(b) for b in best)


@dataclass(frozen=True)
class DyadicBlock:
    """w_M(m/M) w_N(n/N) over m, n and the moduli C <= c < 2C"""
    M: float
    N: float
    C: float

    def __post_init__(self):
        if min(self.M, self.N, self.C) < 1:
            raise ValueError('M, N, C must be >= 1')

    def w_M(self, t):
        return block_bump(t / self.M)

    def w_N(self, t):
        return block_bump(t / self.N)

    def m_support(self):
        return SUPPORT[0] * self.M, SUPPORT[1] * self.M

    def n_support(self):
        return SUPPORT[0] * self.N, SUPPORT[1] * self.N

    def ms(self):
        lo, hi = self.m_support()
        return np.arange(math.floor(lo) + 1, math.ceil(hi))

    def ns(self):
        lo, hi = self.n_support()
        return np.arange(math.floor(lo) + 1, math.ceil(hi))

    def cs(self):
        c = max(1, int(round(self.C)))
        return list(range(c, 2 * c))

    def x_range(self, c):
        """range of 4π √t1 t2 / c over the support"""
        (m_lo, m_hi), (n_lo, n_hi) = self.m_support(), self.n_support()
        return 4 * math.pi * math.sqrt(m_lo) * n_lo / c, 4 * math.pi * math.sqrt(m_hi) * n_hi / c

    def require_desk(self):
        if max(self.M, self.N) > DESK_BLOCK_MAX or self.C > DESK_C_MAX:
            raise BudgetError('block (M=%g, N=%g, C=%g) beyond desk scale M, N <= %d, C <= %d'
                              % (self.M, self.N, self.C, DESK_BLOCK_MAX, DESK_C_MAX))


def _comparable(a, b, slack=REGIME_SLACK):
    return b / slack <= a <= b * slack


@dataclass(frozen=True)
class OscProbe:
    """dual frequencies x1 ≍ X1, x2 ≍ X2 at moduli c ≍ C for one block"""
    X1: float
    X2: float
    C: float
    M: float
    N: float
    sign: Sign = Sign.plus

    def __post_init__(self):
        if self.X1 == 0 or self.X2 == 0 or self.C <= 0:
            raise ValueError('X1, X2 must be nonzero and C positive')

    @property
    def X(self):
        return abs(self.X1) * self.X2 ** 2 / self.C

    def u_plus(self, T):
        return T * T / self.X

    def u_minus(self, T):
        return self.X ** (1 / 3) * T ** (2 / 3)

    def matched(self):
        """x1 x2 > 0 and |X1| M ≍ |X2| N"""
        return self.X1 * self.X2 > 0 and _comparable(abs(self.X1) * self.M, abs(self.X2) * self.N)

    def expected_regime(self, window, eps=EPS_POWER, slack=REGIME_SLACK):
        if not self.matched():
            return Regime.negligible
        T, D = window.T, window.Delta
        size = abs(self.X1) * self.X2 ** 2
        scale = math.sqrt(self.M) * self.N
        reach = scale / self.C
        if self.sign == Sign.plus:
            if reach >= T ** (1 - eps) * D / slack and _comparable(size, scale, slack):
                return Regime.plus
            return Regime.negligible
        if _comparable(reach, T, slack) and size <= scale * D ** (eps - 3) * slack:
            return Regime.minus
        return Regime.negligible
