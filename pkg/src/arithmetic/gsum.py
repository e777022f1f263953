"""The off-diagonal arithmetic factor

    G±(x1, x2; c) = c^-3 Σ_{a, b mod c} S(±a, b²; c) e((a x1 + b x2)/c)

and its Gauss-sum form. Summing over a forces d ≡ ∓x1, so only (x1, c) = 1
survives, and completing the square in b splits by the parity of x1 x2:

    G± = e(±x1 x2²/(4c)) · G'±,   G'+ = e(j x1 x2²/4) · (G1 if x1 x2 even else G2)

with j = (x̄1 x1 - 1)/c for the canonical inverse x̄1 in [0, c). G'- is G'+ at -x1.
Every phase is an exact rational r/q reduced to an index into a table of
q-th roots of unity.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from src.arithmetic.kloosterman import kloosterman_table, root_table, unit_table
from src.const import C_DIRECT_MAX, C_REFERENCE_MAX
from src.errors import BudgetError
from src.types import Sign, WhichG
from src.utils import parallel_map

logger = logging.getLogger(__name__)

_QUARTER_TURNS = (1 + 0j, 1j, -1 + 0j, -1j)


def _canonical_inverse(x, c):
    if c == 1:
        return 0
    if math.gcd(x, c) != 1:
        return None
    return pow(x % c, -1, c)


def exact_phase(numerator, denominator):
    """e(numerator/denominator) via the root table of the denominator"""
    return complex(root_table(denominator)[numerator % denominator])


def gauss_g1(x, c):
    """G1(x; c) = χ_c(x) c^-2 Σ_b e(-x̄ b²/c)"""
    xbar = _canonical_inverse(x, c)
    if xbar is None:
        return 0j
    b = np.arange(c, dtype=np.int64)
    idx = (-xbar * (b * b % c)) % c
    return complex(root_table(c)[idx].sum()) / c ** 2


def gauss_g2(x, c):
    """G2(x; c) = χ_c(x) c^-2 Σ_b e(-x̄ (2b+1)²/(4c))"""
    xbar = _canonical_inverse(x, c)
    if xbar is None:
        return 0j
    q = 4 * c
    b = np.arange(c, dtype=np.int64)
    odd = 2 * b + 1
    idx = (-xbar * (odd * odd % q)) % q
    return complex(root_table(q)[idx].sum()) / c ** 2


@dataclass(frozen=True)
class GSumDecomposition:
    c: int
    x1: int
    x2: int
    sign: Sign
    g1: complex
    g2: complex
    parity_coeffs: tuple
    phase: complex

    @property
    def g_prime(self):
        a, b, c = self.parity_coeffs
        return a * self.g1 + b * self.g1 + c * self.g2

    @property
    def value(self):
        return self.g_prime / self.phase


def g_closed(x1, x2, c, sign=Sign.plus):
    """closed form of G±(x1, x2; c) as a GSumDecomposition"""
    if c < 1:
        raise ValueError('modulus must be >= 1')
    sx1 = int(sign) * x1
    g1 = gauss_g1(sx1, c)
    g2 = gauss_g2(sx1, c)
    # phase e(∓x1 x2²/(4c))
    phase = exact_phase(-sx1 * x2 * x2, 4 * c)
    xbar = _canonical_inverse(sx1, c)
    if xbar is None:
        turn = 1 + 0j
    else:
        j = (xbar * sx1 - 1) // c
        turn = _QUARTER_TURNS[(j * sx1 * x2 * x2) % 4]
    x1_even, x2_even = x1 % 2 == 0, x2 % 2 == 0
    coeffs = (
        turn if (x1_even and not x2_even) else 0j,
        turn if x2_even else 0j,
        turn if not (x1_even or x2_even) else 0j,
    )
    return GSumDecomposition(c, x1, x2, Sign(sign), g1, g2, coeffs, phase)


def g_closed_row(x1, x2_values, c, sign=Sign.plus, with_phase=True):
    """G±(x1, x2; c) over an array of x2 from the closed form; G'± when with_phase is False"""
    if c < 1:
        raise ValueError('modulus must be >= 1')
    sx1 = int(sign) * x1
    g1, g2 = gauss_g1(sx1, c), gauss_g2(sx1, c)
    x2 = np.asarray(x2_values, dtype=np.int64)
    sq = x2 * x2
    xbar = _canonical_inverse(sx1, c)
    if xbar is None:
        turn = np.ones(x2.shape, dtype=complex)
    else:
        j = (xbar * sx1 - 1) // c
        turn = np.array(_QUARTER_TURNS)[(j * sx1 * sq) % 4]
    g = np.where(x2 % 2 == 0, g1, g1 if x1 % 2 == 0 else g2) * turn
    if not with_phase:
        return g
    return g / root_table(4 * c)[(-sx1 * sq) % (4 * c)]


def g_direct(x1, x2, c, sign=Sign.plus, c_direct_max=C_DIRECT_MAX):
    """direct G±(x1, x2; c) with the a-sum done in closed form (O(c²))"""
    if c < 1:
        raise ValueError('modulus must be >= 1')
    if c > c_direct_max:
        raise BudgetError('g_direct modulus %d exceeds c_direct_max %d' % (c, c_direct_max))
    if c == 1:
        return 1 + 0j
    units, inverses = unit_table(c)
    # Σ_a e(a(±d + x1)/c) = c when ±d ≡ -x1, else 0
    a_sum = np.where((int(sign) * units + x1) % c == 0, c, 0)
    b = np.arange(c, dtype=np.int64)
    idx = ((b * b % c)[:, None] * inverses[None, :] + (b * x2 % c)[:, None]) % c
    total = (root_table(c)[idx] * a_sum[None, :]).sum()
    return complex(total) / c ** 3


def g_direct_reference(x1, x2, c, sign=Sign.plus):
    """the un-collapsed triple sum over a, b and the Kloosterman variable (O(c³))"""
    if c > C_REFERENCE_MAX:
        raise BudgetError('reference path is limited to c <= %d' % C_REFERENCE_MAX)
    a = np.repeat(np.arange(c, dtype=np.int64), c)
    b = np.tile(np.arange(c, dtype=np.int64), c)
    sums = kloosterman_table(int(sign) * a, b * b, c)
    phases = root_table(c)[(a * x1 + b * x2) % c]
    return complex((sums * phases).sum()) / c ** 3


def g_component(x1, c, which):
    return gauss_g1(x1, c) if which == WhichG.g1 else gauss_g2(x1, c)


def g_second_moment(x1, big_c, which=WhichG.g1, threads=1):
    """(Σ_{C <= c < 2C} |G_i(x1; c)|², that times C²)"""
    if big_c < 2:
        raise ValueError('C must be >= 2')
    values = parallel_map(lambda c: abs(g_component(x1, c, which)) ** 2, range(big_c, 2 * big_c), threads)
    value = math.fsum(values)
    return value, value * big_c ** 2


def weyl_ratio_sweep(c_max, x_range, threads=1):
    """max over the grid of |G'±(x1, x2; c)| c^{3/2}"""
    def one(c):
        best = 0.0
        for x1 in x_range:
            for x2 in x_range:
                for sign in (Sign.plus, Sign.minus):
                    best = max(best, abs(g_closed(x1, x2, c, sign).g_prime) * c ** 1.5)
        return best
    return max(parallel_map(one, range(1, c_max + 1), threads))


def closed_vs_direct_sweep(c_max, x_max, threads=1):
    """max |g_direct - g_closed| over c <= c_max, |x1|, |x2| <= x_max, both signs"""
    xs = range(-x_max, x_max + 1)

    def one(c):
        worst = 0.0
        for x1 in xs:
            for x2 in xs:
                for sign in (Sign.plus, Sign.minus):
                    worst = max(worst, abs(g_direct(x1, x2, c, sign) - g_closed(x1, x2, c, sign).value))
        return worst
    worst = max(parallel_map(one, range(1, c_max + 1), threads))
    logger.info('closed form vs direct over c <= %d: max diff %.3g', c_max, worst)
    return worst
