import math

import numpy as np

from src.arithmetic.gsum import closed_vs_direct_sweep, g_direct, g_second_moment, weyl_ratio_sweep
from src.arithmetic.kloosterman import (eta_t, eta_t_squares, eta_t_table, kloosterman_complex, kloosterman_table,
                                        kloosterman_twisted, weil_bound)
from src.const import WEIL_RATIO_CONSTANT
from src.suites.suite import Suite
from src.types import Sign, WhichG
from src.utils import coprime_factorizations, parallel_map

ARITH_TOL = 1e-9
KLOOSTERMAN_AB = 12
ETA_T = 3.7


class KloostermanSuite(Suite):
    """Weil bound, twisted multiplicativity and realness of S(a, b; c) for c <= c_max"""
    name = 'kloosterman'
    parameters = (('ab-max', int, KLOOSTERMAN_AB, 'largest |a|, |b|'),)

    def getName(self):
        return 'Kloosterman sums'

    def solve(self):
        c_max = self.config.c_max
        ab = np.arange(-self.params['ab-max'], self.params['ab-max'] + 1)
        a, b = np.meshgrid(ab, ab, indexing='ij')
        a, b = a.ravel(), b.ravel()

        def one(c):
            values = kloosterman_table(a, b, c)
            bounds = np.array([weil_bound(abs(int(x)), abs(int(y)), c) for x, y in zip(a, b)])
            twisted = 0.0
            for c1, c2 in coprime_factorizations(c):
                for x, y in ((1, 1), (2, 5), (-3, 7)):
                    twisted = max(twisted, abs(kloosterman_twisted(x, y, c1, c2) - kloosterman_table([x], [y], c)[0]))
            imag = max(abs(kloosterman_complex(x, y, c).imag) for x, y in ((1, 1), (2, 5), (-3, 7)))
            return float(np.max(np.abs(values) - bounds)), twisted, imag

        rows = parallel_map(one, range(1, c_max + 1), self.config.threads)
        self.check('max |S| - Weil bound', max(r[0] for r in rows), ARITH_TOL)
        self.check('twisted multiplicativity', max(r[1] for r in rows), ARITH_TOL)
        self.check('imaginary part', max(r[2] for r in rows), ARITH_TOL)

        n_max = 4 * c_max
        table = eta_t_table(n_max, ETA_T)
        squares = eta_t_squares(int(math.isqrt(n_max)), ETA_T)
        self.check('eta table', max(abs(table[m] - eta_t(m, ETA_T)) for m in range(1, n_max + 1)), ARITH_TOL)
        self.check('eta squares', max(abs(squares[n] - eta_t(n * n, ETA_T)) for n in range(1, len(squares))),
                   ARITH_TOL)


class GSumSuite(Suite):
    """closed form of the arithmetic part against the direct sum, Weyl ratio and second moments"""
    name = 'gsum-verify'
    parameters = (
        ('x-max', int, 10, 'largest |x1|, |x2| of the closed-form grid'),
        ('moment-kmax', int, 12, 'second moments over C = 2^5 .. 2^kmax'),
    )

    def getName(self):
        return 'Arithmetic part G'

    def solve(self):
        c_max, threads = self.config.c_max, self.config.threads
        self.check('max |direct - closed|', closed_vs_direct_sweep(c_max, self.params['x-max'], threads), 1e-10)
        zero = max(abs(g_direct(0, 0, c, sign)) for c in range(2, c_max + 1) for sign in (Sign.plus, Sign.minus))
        self.check('G(0, 0; c) = 0', zero, 0.0)
        support = max(abs(g_direct(x1, x2, c, sign)) for c in range(2, min(c_max, 30) + 1)
                      for x1 in range(1, 8) if math.gcd(x1, c) > 1 for x2 in (1, 2, 3)
                      for sign in (Sign.plus, Sign.minus))
        self.check('coprime support', support, 0.0)
        self.check('Weyl ratio', weyl_ratio_sweep(min(c_max, 40), range(-6, 7), threads), WEIL_RATIO_CONSTANT)

        ks = range(5, self.params['moment-kmax'] + 1)
        for which in (WhichG.g1, WhichG.g2):
            for x1 in (1, 3, 7):
                normalized = [g_second_moment(x1, 2 ** k, which, threads)[1] for k in ks]
                for k, value in zip(ks, normalized):
                    self.note('C^2 sum |%s(%d; c)|^2 C=2^%d' % (which.name, x1, k), value)
                self.check('second moment %s x1=%d spread' % (which.name, x1), max(normalized),
                           10 * min(normalized))
