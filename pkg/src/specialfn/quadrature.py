import logging
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from src.const import (DEFAULT_ABS_TOL, DEFAULT_GUARD_BITS, DEFAULT_MAX_REFINEMENTS, DEFAULT_REL_TOL,
                       DEFAULT_SCHEME, DEFAULT_WORKING_BITS, MIN_WORKING_BITS)
from src.errors import InsufficientPrecisionError, NonConvergenceError
from src.types import QuadratureScheme

logger = logging.getLogger(__name__)

_METHODS = {
    QuadratureScheme.adaptiveGauss: 'gauss-legendre',
    QuadratureScheme.doubleExponential: 'tanh-sinh',
}


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: QuadratureScheme = DEFAULT_SCHEME
    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    max_refinements: int = DEFAULT_MAX_REFINEMENTS
    truncation_radius: float = 1.0

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError('tolerances must be positive')
        if self.max_refinements < 1:
            raise ValueError('max_refinements must be >= 1')
        if self.truncation_radius <= 0:
            raise ValueError('truncation_radius must be positive')

    @property
    def method(self):
        return _METHODS[self.scheme]

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class PrecisionPolicy:
    """Working precision for mpmath evaluations.

    working_bits is the precision callers ask for; operations with a known
    cancellation (Bessel series, imaginary-order K) raise it through scaled().
    """
    working_bits: int = DEFAULT_WORKING_BITS
    series_guard_bits: int = DEFAULT_GUARD_BITS

    def __post_init__(self):
        if self.working_bits < MIN_WORKING_BITS:
            raise ValueError('working_bits must be >= %d' % MIN_WORKING_BITS)
        if self.series_guard_bits < 0:
            raise ValueError('series_guard_bits must be >= 0')

    def scaled(self, cancellation_bits):
        """policy whose working precision covers a cancellation of the given size"""
        need = int(math.ceil(cancellation_bits)) + self.series_guard_bits + MIN_WORKING_BITS
        if need <= self.working_bits:
            return self
        return PrecisionPolicy(need, self.series_guard_bits)

    def require(self, cancellation_bits, what):
        need = int(math.ceil(cancellation_bits)) + self.series_guard_bits
        if need > self.working_bits:
            raise InsufficientPrecisionError(
                '%s needs %d bits, policy has %d' % (what, need, self.working_bits),
                required_bits=need, working_bits=self.working_bits)

    @property
    def total_bits(self):
        return self.working_bits + self.series_guard_bits


def policy_or_default(prec):
    return prec if prec is not None else PrecisionPolicy(max(mp.prec, DEFAULT_WORKING_BITS))


def quad_interval(f, points, spec=None, prec=None):
    """(value, error) of the integral of f over the broken line through points.

    Raises NonConvergenceError when the estimate exceeds max(abs_tol, rel_tol*|value|).
    """
    spec = spec or QuadratureSpec()
    prec = policy_or_default(prec)
    with mp.workprec(prec.total_bits):
        value, err = mp.quad(f, list(points), method=spec.method, error=True,
                             maxdegree=spec.max_refinements)
    tol = spec.tolerance(value)
    logger.debug('quad %s over %d panels: err %.3g (tol %.3g)', spec.method, len(points) - 1, float(err), tol)
    if err > tol:
        raise NonConvergenceError('quadrature error %.3g exceeds %.3g' % (float(err), tol), estimate=float(err))
    return value, err


def panels(a, b, width):
    """breakpoints splitting [a, b] into pieces no longer than width"""
    count = max(1, int(math.ceil((b - a) / width)))
    return [a + (b - a) * j / count for j in range(count + 1)]


@dataclass(frozen=True)
class LineRule:
    """Trapezoid rule for (1/2πi)∫ f(u) du along Re u = sigma, |Im u| <= height.

    The integrands here are analytic in a strip around the line and decay
    like a Gaussian, so the rule converges geometrically in 1/step.
    """
    sigma: float
    height: float
    step: float

    @property
    def count(self):
        return 2 * int(math.ceil(self.height / self.step)) + 1

    @property
    def heights(self):
        half = (self.count - 1) // 2
        return self.step * np.arange(-half, half + 1, dtype=float)

    @property
    def nodes(self):
        return self.sigma + 1j * self.heights

    @property
    def weights(self):
        return np.full(self.count, self.step / (2 * math.pi))

    def integrate(self, values):
        return complex(np.dot(self.weights, values))

    def coarse(self):
        return LineRule(self.sigma, self.height, 2 * self.step)

    def shifted(self, sigma):
        return LineRule(sigma, self.height, self.step)


def line_error_estimate(rule, values):
    """|I(h) - I(2h)| using every other node of an existing evaluation"""
    fine = rule.integrate(values)
    half = (rule.count - 1) // 2
    idx = np.arange(rule.count)
    keep = (idx - half) % 2 == 0
    coarse = complex(np.sum(values[keep]) * 2 * rule.step / (2 * math.pi))
    return abs(fine - coarse)
