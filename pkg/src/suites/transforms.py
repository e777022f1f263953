from src.afe.contour import SpectralWindow
from src.suites.suite import Suite
from src.tracecheck.window import WeightWindow
from src.transforms.bessel_transforms import (H_holo, H_holo_integral, H_minus, H_minus_nested, minus_decay_probe,
                                              plus_decay_probe, transition_scan)

DECAY_RATIO = 1e-6
HOLO_ROUTE_TOL = 1e-8
MINUS_ROUTE_REL = 1e-6


class TransformsSuite(Suite):
    """decay of H⁺ and H⁻ outside their regimes and the two routes for H⁻ and H_holo"""
    name = 'transforms'
    parameters = (
        ('T', float, 30.0, 'window centre'),
        ('Delta', float, 4.0, 'window width'),
        ('K', int, 40, 'holomorphic window centre'),
        ('holo-Delta', float, 8.0, 'holomorphic window width'),
        ('x', float, 20.0, 'argument of the H_holo route check'),
    )

    def getName(self):
        return 'Bessel transforms'

    def solve(self):
        window = SpectralWindow(self.params['T'], self.params['Delta'])
        quad, prec = self.quad(), self.prec()

        value, peak, ratio = plus_decay_probe(window, quad=quad, prec=prec)
        self.note('|H+(Delta T/10)|', value)
        self.note('T Delta (10 Delta T)^-1/2', peak)
        self.check('H+ decay ratio', ratio, DECAY_RATIO)

        far = 100 * window.T
        value, peak, ratio = minus_decay_probe(window, far, quad=quad, prec=prec)
        self.note('|H-(%g)|' % far, value)
        self.note('|H-(2T)|', peak)
        self.check('H- off-support ratio', ratio, DECAY_RATIO)

        x = window.T
        direct = H_minus(x, window, quad, prec)
        nested = H_minus_nested(x, window, quad, prec)
        self.check('H- routes x=%g' % x, abs(direct - nested), MINUS_ROUTE_REL * abs(nested) + 1e-8)

        for x, value, scaled in transition_scan([window.T, 3 * window.T, 10 * window.T], window, quad, prec):
            self.note('|H+(%g)| / (T Delta x^-1/2)' % x, scaled)

        holo = WeightWindow(self.params['K'], self.params['holo-Delta'])
        x = self.params['x']
        self.note('H_holo(%g)' % x, H_holo(x, holo, prec))
        self.check('H_holo routes x=%g' % x, abs(H_holo_integral(x, holo) - H_holo(x, holo, prec)), HOLO_ROUTE_TOL)
