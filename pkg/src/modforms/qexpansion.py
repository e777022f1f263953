import numpy as np

from src.utils import divisors


class QExpansion:
    """A truncated q-expansion with exact integer coefficients 0..n_max."""

    def __init__(self, coeffs, weight=0, n_max=None):
        coeffs = np.array([int(c) for c in coeffs], dtype=object)
        if n_max is None:
            n_max = len(coeffs) - 1
        if len(coeffs) > n_max + 1:
            coeffs = coeffs[:n_max + 1]
        elif len(coeffs) < n_max + 1:
            coeffs = np.concatenate([coeffs, np.zeros(n_max + 1 - len(coeffs), dtype=object)])
        self.coeffs = coeffs
        self.weight = weight
        self.n_max = n_max

    def __repr__(self):
        return 'QExpansion(weight=%d, n_max=%d, coeffs=%s...)' % (self.weight, self.n_max, list(self.coeffs[:5]))

    def __getitem__(self, n):
        return int(self.coeffs[n])

    def __eq__(self, other):
        n_max = min(self.n_max, other.n_max)
        return all(int(a) == int(b) for a, b in zip(self.coeffs[:n_max + 1], other.coeffs[:n_max + 1]))

    def _scalar(self, value):
        coeffs = np.zeros(self.n_max + 1, dtype=object)
        coeffs[0] = int(value)
        return QExpansion(coeffs, self.weight, self.n_max)

    def __add__(self, other):
        if isinstance(other, int):
            other = self._scalar(other)
        n_max = min(self.n_max, other.n_max)
        return QExpansion(self.coeffs[:n_max + 1] + other.coeffs[:n_max + 1], self.weight, n_max)

    __radd__ = __add__

    def __neg__(self):
        return QExpansion(-self.coeffs, self.weight, self.n_max)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QExpansion) else -int(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, int):
            return QExpansion(self.coeffs * other, self.weight, self.n_max)
        n_max = min(self.n_max, other.n_max)
        full = np.convolve(self.coeffs[:n_max + 1], other.coeffs[:n_max + 1])
        return QExpansion(full[:n_max + 1], self.weight + other.weight, n_max)

    __rmul__ = __mul__

    def __pow__(self, power):
        if power < 0:
            raise ValueError('only non-negative integer powers')
        result = QExpansion([1], 0, self.n_max)
        base = self
        while power > 0:
            if power % 2 == 1:
                result = result * base
            base = base * base
            power //= 2
        return result

    def exact_div(self, divisor):
        if any(int(c) % divisor for c in self.coeffs):
            raise ValueError('coefficients are not divisible by %d' % divisor)
        return QExpansion([int(c) // divisor for c in self.coeffs], self.weight, self.n_max)


def sigma(n, k):
    return sum(d ** k for d in divisors(n))


def eisenstein_qexp(k, n_max):
    """E4 = 1 + 240 Σ σ3(n) q^n, E6 = 1 - 504 Σ σ5(n) q^n"""
    if n_max < 10:
        raise ValueError('n_max must be >= 10')
    if k == 4:
        scale, power = 240, 3
    elif k == 6:
        scale, power = -504, 5
    else:
        raise ValueError('only E4 and E6 are provided')
    coeffs = [1] + [scale * sigma(n, power) for n in range(1, n_max + 1)]
    return QExpansion(coeffs, k, n_max)


def euler_product(n_max):
    """Π (1 - q^n) by the pentagonal number theorem"""
    coeffs = [0] * (n_max + 1)
    coeffs[0] = 1
    m = 1
    while True:
        p1 = m * (3 * m - 1) // 2
        p2 = m * (3 * m + 1) // 2
        if p1 > n_max:
            break
        coeffs[p1] = (-1) ** m
        if p2 <= n_max:
            coeffs[p2] = (-1) ** m
        m += 1
    return QExpansion(coeffs, 0, n_max)


def delta_qexp(n_max):
    """Δ = q Π (1 - q^n)^24"""
    if n_max < 10:
        raise ValueError('n_max must be >= 10')
    product = euler_product(n_max) ** 24
    coeffs = [0] + [int(c) for c in product.coeffs[:n_max]]
    return QExpansion(coeffs, 12, n_max)
