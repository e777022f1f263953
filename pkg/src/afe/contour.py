import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from mpmath import mp

from src.const import AFE_SIGMA, EPS_POWER, LINE_STEP, MOLLIFIER_EISENSTEIN
from src.specialfn.quadrature import LineRule
from src.types import WeightVariant

logger = logging.getLogger(__name__)

# Gaussian tail of G(u) = e^{a u²} on the line, in nepers
LINE_TAIL = 45.0


@dataclass(frozen=True)
class ContourSpec:
    """Vertical line Re u = sigma, |Im u| <= height, mollifier G(u) = exp(a u²).

    height = 0 means "choose per evaluation": at least (log T)², and far enough
    out that the Gaussian mollifier has decayed below e^-45.
    """
    sigma: float = AFE_SIGMA
    height: float = 0.0
    mollifier_scale: float = MOLLIFIER_EISENSTEIN
    variant: WeightVariant = WeightVariant.exactGammaRatio
    step: float = LINE_STEP

    def __post_init__(self):
        if self.height < 0 or self.step <= 0:
            raise ValueError('height must be >= 0 and step > 0')
        if self.mollifier_scale < 0:
            raise ValueError('mollifier scale must be >= 0')

    def G(self, u):
        if isinstance(u, np.ndarray):
            return np.exp(self.mollifier_scale * u * u)
        return mp.exp(self.mollifier_scale * u * u)

    def resolved_height(self, scale, gamma_degree=0.0):
        if self.height > 0:
            return self.height
        floor = math.log(max(scale, math.e)) ** 2
        if self.mollifier_scale > 0:
            scaled = (LINE_TAIL + 2 * self.sigma ** 2 * self.mollifier_scale) / self.mollifier_scale
            return max(floor, math.sqrt(scaled))
        # only the gamma factors decay: roughly e^{-π|v|/4} against |v|^degree
        return max(floor, 40.0 + 2.0 * gamma_degree)

    def rule(self, scale, gamma_degree=0.0, sigma=None):
        return LineRule(self.sigma if sigma is None else sigma, self.resolved_height(scale, gamma_degree), self.step)

    def with_variant(self, variant):
        return replace(self, variant=variant)

    def with_mollifier(self, scale):
        return replace(self, mollifier_scale=scale)

    def doubled(self):
        return replace(self, height=2 * self.resolved_height(1.0))


@dataclass(frozen=True)
class SpectralWindow:
    T: float
    Delta: float

    def __post_init__(self):
        if self.T < 10:
            raise ValueError('T must be >= 10')
        if not 1 <= self.Delta <= self.T:
            raise ValueError('Delta must lie in [1, T]')
        if not self.T ** EPS_POWER <= self.Delta <= self.T ** (1 - EPS_POWER):
            logger.warning('window (T=%g, Delta=%g) outside T^eps <= Delta <= T^(1-eps)', self.T, self.Delta)
