import logging
import math
from dataclasses import dataclass

import numpy as np

from src.const import EPS_POWER

logger = logging.getLogger(__name__)

BUMP_RADIUS = 1.0


def bump(x, radius=BUMP_RADIUS):
    """exp(1 - 1/(1 - (x/r)²)) inside |x| < r, 0 outside; bump(0) = 1"""
    x = np.asarray(x, dtype=float)
    y = x / radius
    with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
        out = np.where(np.abs(y) < 1, np.exp(1 - 1 / (1 - y * y)), 0.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WeightWindow:
    """h((4k - K - 1)/Δ) over the weights 4k, h a bump of the given radius"""
    K: int
    Delta: float
    radius: float = BUMP_RADIUS

    def __post_init__(self):
        if self.K < 12:
            raise ValueError('K must be >= 12')
        if self.Delta < 1:
            raise ValueError('Delta must be >= 1')
        if not self.K ** EPS_POWER <= self.Delta <= self.K ** (1 - EPS_POWER):
            logger.warning('weight window (K=%d, Delta=%g) outside K^eps <= Delta <= K^(1-eps)', self.K, self.Delta)

    def h(self, x):
        return bump(x, self.radius)

    def h_k(self, k):
        return self.h((4 * k - self.K - 1) / self.Delta)

    def ks(self):
        reach = self.Delta * self.radius
        lo = max(1, math.ceil((self.K + 1 - reach) / 4))
        hi = math.floor((self.K + 1 + reach) / 4)
        return [k for k in range(lo, hi + 1) if abs(4 * k - self.K - 1) < reach]

    def weights(self):
        return [4 * k for k in self.ks()]
