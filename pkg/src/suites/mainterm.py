import math

from mpmath import mp

from src.afe.contour import ContourSpec, SpectralWindow
from src.afe.lvalues import c_constant
from src.const import DIAGONAL_HOLO_CONSTANT, DIAGONAL_MAASS_CONSTANT
from src.mainterm.constants import a4_rederived, c_p, constants
from src.mainterm.diagonal import (a2_reduction, diagonal_holo, diagonal_holo_asymptotic, diagonal_maass,
                                   h_plain_closed, holo_theorem_form, window_integrals)
from src.mainterm.pfunction import (p_asymptotic, p_contour, p_residual_report, p_residue, p_series_detail,
                                    slope_in_band)
from src.specialfn.zeta import zeta
from src.suites.suite import Suite, number_list
from src.tracecheck.window import WeightWindow
from src.types import CConstantForm

CONSTANT_TOL = 1e-12
WINDOW_REL_TOL = 1e-8
P_ROUTE_TOL = 1e-8


class MainTermSuite(Suite):
    """constants a1..a4, P(t) against its asymptotic, window integrals and the Maass diagonal"""
    name = 'mainterm'
    parameters = (
        ('ts', number_list, [1e2, 1e3, 1e4], 'comma-separated heights for P(t)'),
        ('T', float, 1000.0, 'window centre for the window integrals'),
        ('Delta', float, 10.0, 'window width for the window integrals'),
        ('diagonal-T', float, 500.0, 'window centre for the Maass diagonal, 0 to skip'),
        ('diagonal-Delta', float, 20.0, 'window width for the Maass diagonal'),
    )

    def getName(self):
        return 'Maass main term'

    def solve(self):
        prec = self.prec()
        c = constants(prec)
        z32 = float(zeta(mp.mpf(3) / 2, prec))
        for name in ('a1', 'a2', 'a3', 'a4', 'c_P'):
            self.note(name, getattr(c, name))
        self.check('a1 = (2/pi) zeta(3/2)', abs(c.a1 - 2 / math.pi * z32) / c.a1, CONSTANT_TOL)
        self.check('a3 = 2 zeta(3/2)', abs(c.a3 - 2 * z32) / c.a3, CONSTANT_TOL)
        self.check('a3/a1 = pi', abs(c.a3 / c.a1 - math.pi) / math.pi, CONSTANT_TOL)
        self.check('c_P closed vs digamma', abs(float(c_p(prec, True) - c_p(prec, False))), CONSTANT_TOL)
        self.check('a2 = (4/pi) c_P', abs(c.a2 - 4 / math.pi * c.c_P) / abs(c.a2), CONSTANT_TOL)
        self.check('a4 rederived', abs(a4_rederived(prec=prec) - c.a4) / abs(c.a4), CONSTANT_TOL)

        a = self.config.mollifier_scale
        contour = p_contour() if a is None else p_contour(mollifier_scale=a)
        rows, slope = p_residual_report(self.params['ts'], contour)
        for t, numeric, asym, residual, scaled in rows:
            self.note('P(%g)' % t, numeric)
            self.note('P residual t=%g' % t, residual)
            self.check('P residual envelope t=%g' % t, scaled, 1.0)
        self.note('P residual log-log slope', slope)
        if not slope_in_band(slope):
            self.flag('slope outside [-0.4, -0.1]')
        t0 = self.params['ts'][0]
        series = p_series_detail(t0, None if a is None else ContourSpec(mollifier_scale=a))
        self.check('P series route t=%g' % t0, abs(series[0] - rows[0][1]), P_ROUTE_TOL)
        residue, _ = p_residue(t0, contour, prec=prec)
        self.check('P residue = asymptotic t=%g' % t0, abs(residue - p_asymptotic(t0, prec)), CONSTANT_TOL)

        window = SpectralWindow(self.params['T'], self.params['Delta'])
        h_log, h_plain = window_integrals(window, self.quad(), prec)
        scale = math.sqrt(math.pi) * window.Delta * window.T
        self.note('H plain', h_plain)
        self.note('H log', h_log)
        self.check('H plain = sqrt(pi) Delta T', abs(h_plain - scale) / scale, WINDOW_REL_TOL)
        self.check('H plain closed form', abs(h_plain - h_plain_closed(window)) / h_plain, WINDOW_REL_TOL)
        self.check('H log = sqrt(pi) Delta T log T', abs(h_log - scale * math.log(window.T)),
                   window.Delta ** 2 * math.log(window.T))
        reduction = a2_reduction(window, self.quad(), prec)
        self.note('a2 reduction tanh term', reduction['tanh'])
        self.check('a2 reduction', abs(reduction['a2'] - c.a2) / abs(c.a2), WINDOW_REL_TOL)

        if self.params['diagonal-T'] > 0:
            report = diagonal_maass(SpectralWindow(self.params['diagonal-T'], self.params['diagonal-Delta']))
            self.note('Maass diagonal', report.numeric)
            self.note('Maass diagonal asymptotic', report.asymptotic)
            self.note('Maass diagonal terms', report.terms)
            self.check('Maass diagonal residual ratio', report.bound_ratio, DIAGONAL_MAASS_CONSTANT)


class MainTermHoloSuite(Suite):
    """holomorphic diagonal against 2 Σ h_k (ζ(3/2) log 4k + C ζ(3/2) + ζ'(3/2)) and the theorem form"""
    name = 'mainterm-holo'
    parameters = (
        ('K', int, 100, 'weight window centre'),
        ('Delta', float, 16.0, 'weight window width'),
    )

    def getName(self):
        return 'Holomorphic main term'

    def solve(self):
        wwindow = WeightWindow(self.params['K'], self.params['Delta'])
        report = diagonal_holo(wwindow)
        self.note('diagonal', report.numeric)
        self.note('asymptotic', report.asymptotic)
        self.note('weights', len(wwindow.ks()))
        self.check('diagonal residual ratio', report.bound_ratio, DIAGONAL_HOLO_CONSTANT)
        if not wwindow.ks():
            self.flag('empty weight window')
            return
        derived = diagonal_holo_asymptotic(wwindow, CConstantForm.derived, self.prec())
        theorem = holo_theorem_form(wwindow, self.prec())
        self.check('asymptotic = a3 sum h log k + a4 sum h', abs(derived - theorem) / abs(theorem), 1e-10)
        if self.config.c_constant_form in ('both', 'printed'):
            printed = diagonal_holo_asymptotic(wwindow, CConstantForm.printed, self.prec())
            self.note('asymptotic with printed C', printed)
            self.note('C printed - derived', c_constant(CConstantForm.printed) - c_constant(CConstantForm.derived))
