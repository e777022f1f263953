import numpy as np

from src.const import SUPPORTED_WEIGHTS
from src.modforms.eigenform import dim1_cuspform, hecke_extend, hecke_relation_residual, lambda_squares
from src.modforms.qexpansion import delta_qexp, eisenstein_qexp
from src.suites.suite import Suite
from src.utils import parallel_map, tau

HECKE_TOL = 1e-9


class FormsSuite(Suite):
    """q-expansions, Hecke relations and the Deligne bound for the one-dimensional weights"""
    name = 'forms'
    parameters = (('n-max', int, 400, 'q-expansion length'),)

    def getName(self):
        return 'Holomorphic eigenforms'

    def solve(self):
        n_max = self.params['n-max']
        e4, e6 = eisenstein_qexp(4, n_max), eisenstein_qexp(6, n_max)
        self.check('Delta = (E4^3 - E6^2)/1728', 0, 0, (e4 ** 3 - e6 ** 2).exact_div(1728) == delta_qexp(n_max))
        taus = np.array([tau(n) for n in range(1, n_max + 1)], dtype=float)

        def one(weight):
            form = dim1_cuspform(weight, n_max)
            deligne = float(np.max(np.abs(form.lam[1:]) - taus))
            root = int(n_max ** 0.5)
            squares = lambda_squares(form, root)
            extended = hecke_extend(form, n_max)
            ext = max(abs(squares[n] - extended[n * n]) for n in range(1, root + 1))
            return weight, form.a[2], hecke_relation_residual(form), deligne, ext

        for weight, a2, residual, deligne, ext in parallel_map(one, SUPPORTED_WEIGHTS, self.config.threads):
            self.note('a(2) w=%d' % weight, a2)
            self.check('Hecke relations w=%d' % weight, residual, HECKE_TOL)
            self.check('Deligne bound w=%d' % weight, deligne, 1e-12)
            self.check('lambda(n^2) vs extension w=%d' % weight, ext, 1e-10)
