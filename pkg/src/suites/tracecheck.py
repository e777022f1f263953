import math

from src.afe.contour import ContourSpec, SpectralWindow
from src.const import SUPPORTED_WEIGHTS
from src.specialfn.quadrature import PrecisionPolicy
from src.suites.suite import Suite, int_list
from src.tracecheck.kuznetsov import continuous_spectrum_detail, kuznetsov_rhs
from src.tracecheck.petersson import (PETERSSON_TOL, mixed_moment_tf_holo, moment_per_weight, petersson_check,
                                      petersson_grid)
from src.tracecheck.window import WeightWindow

C_SUM_SETTLED = 1e-8


class PeterssonSuite(Suite):
    """w_f λ(n)λ(m) = δ(n, m) + 2π i^{-w} Σ_c S(n, m; c)/c J_{w-1}(4π√(nm)/c) per weight"""
    name = 'petersson-verify'
    parameters = (
        ('weights', int_list, list(SUPPORTED_WEIGHTS), 'comma-separated weights'),
        ('n-max', int, 20, 'largest n, m'),
    )

    def getName(self):
        return 'Petersson formula'

    def solve(self):
        weights = self.params['weights']
        reports = petersson_grid(weights, self.params['n-max'])
        for weight in weights:
            mine = [r for (w, _, _), r in reports.items() if w == weight]
            self.note('pairs w=%d' % weight, len(mine))
            self.check('max |lhs - rhs| w=%d' % weight, max(r.difference for r in mine), PETERSSON_TOL,
                       all(r.passed for r in mine))
        # the configured c_max on the smallest pair; a short c_max surfaces as a truncation error
        spot = petersson_check(weights[0], 1, 1, c_max=self.config.c_max)
        self.note('kloosterman tail at c_max w=%d' % weights[0], spot.tail_bounds['kloosterman'])
        self.check('c_max=%d w=%d n=m=1' % (self.config.c_max, weights[0]), spot.difference, spot.tolerance)


class KuznetsovSuite(Suite):
    """right-hand side of the Kuznetsov formula for h_{T,Δ} and the continuous-spectrum term"""
    name = 'kuznetsov-rhs'
    parameters = (
        ('T', float, 30.0, 'window centre'),
        ('Delta', float, 4.0, 'window width'),
        ('m', int, 1, 'first frequency'),
        ('n', int, 1, 'second frequency'),
        ('continuous', int, 1, '1 to add the continuous-spectrum term'),
    )

    def getName(self):
        return 'Kuznetsov right-hand side'

    def precision(self):
        """enough bits for H⁺ at the largest argument 4π√(mn)"""
        x = 4 * math.pi * math.sqrt(self.params['m'] * self.params['n'])
        return PrecisionPolicy(max(self.config.precision_bits, int(1.5 * x) + 96))

    def solve(self):
        window = SpectralWindow(self.params['T'], self.params['Delta'])
        report = kuznetsov_rhs(window, self.params['m'], self.params['n'], self.config.c_max, self.quad(),
                               self.precision())
        self.moment = report
        for flag in report.flags:
            self.flag(flag)
        settled = C_SUM_SETTLED * max(abs(report.rhs), 1.0)
        self.check('last c contribution', report.terms['last_c'], settled)
        if not self.params['continuous']:
            return
        detail = continuous_spectrum_detail(window, self.config.omega_convention)
        self.flag(detail.flag)
        self.note('continuous spectrum', detail.value)
        self.note('continuous refinement estimate', detail.estimate)
        self.check('continuous term within Cauchy-Schwarz', abs(detail.value), detail.cauchy_schwarz_bound)


class MomentHoloSuite(Suite):
    """Σ_f w_f h L(1/2, f) L(1/2, sym² f) by eigenvalues against D + R through the Petersson formula"""
    name = 'moment-holo'
    parameters = (
        ('K', int, 12, 'weight window centre'),
        ('Delta', float, 2.0, 'weight window width'),
    )

    def getName(self):
        return 'Holomorphic mixed moment'

    def solve(self):
        wwindow = WeightWindow(self.params['K'], self.params['Delta'])
        a = self.config.mollifier_scale
        contour = None if a is None else ContourSpec(mollifier_scale=a)
        for weight, value in moment_per_weight(wwindow).items():
            self.note('direct w=%d' % weight, value)
        report = mixed_moment_tf_holo(wwindow, self.config.c_max, contour, self.config.truncation_multiplier,
                                      threads=self.config.threads)
        self.moment = report
        self.check('|direct - (D + R)|', report.difference, report.tolerance)
