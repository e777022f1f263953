from mpmath import mp

from src.specialfn.bessel import bessel_j, bessel_j_array
from src.specialfn.gamma import digamma, gamma_c, log_gamma, psi_quarter_closed, psi_three_quarter_closed
from src.specialfn.zeta import zeta, zeta_partial_oracle
from src.suites.suite import Suite
from src.utils import make_rng

SPECIAL_TOL = 1e-20
FLOAT_TOL = 1e-12
ZETA_POINTS = (mp.mpf(2), mp.mpc(0.5, 14), mp.mpc(0.5, 300), mp.mpc(-2.5, 3))
BESSEL_POINTS = ((0, 21.0), (11, 5.0), (11, 25.0), (19, 120.5), (23, 300.0))


class SpecialFnSuite(Suite):
    """log Γ, ψ, ζ and J_n against mpmath and closed forms"""
    name = 'specialfn-test'
    parameters = (('points', int, 20, 'random complex points for the Γ checks'),)

    def getName(self):
        return 'Special functions'

    def tolerance(self):
        return max(SPECIAL_TOL, 2.0 ** (24 - self.config.precision_bits))

    def solve(self):
        tol = self.tolerance()
        prec = self.prec()
        rng = make_rng(self.config.seed)
        zs = [mp.mpc(x, y) for x, y in zip(rng.uniform(0.5, 30, self.params['points']),
                                            rng.uniform(-40, 40, self.params['points']))]
        self.check('log_gamma vs mpmath', max(abs(log_gamma(z, prec) - mp.loggamma(z)) for z in zs), tol)
        self.check('log_gamma recurrence', max(abs(mp.exp(log_gamma(z + 1, prec) - log_gamma(z, prec)) - z) / abs(z)
                                              for z in zs), tol)
        s = mp.mpc(0.5, 7)
        self.check('gamma_c', abs(gamma_c(s, prec) - 2 * (2 * mp.pi) ** (-s) * mp.gamma(s)), tol)

        self.check('psi(1/4) closed form', abs(digamma(mp.mpf(1) / 4, prec) - psi_quarter_closed()), tol)
        self.check('psi(3/4) closed form', abs(digamma(mp.mpf(3) / 4, prec) - psi_three_quarter_closed()), tol)
        self.check('psi reflection', max(abs(digamma(mp.mpf(3) / 4 - n, prec) - digamma(mp.mpf(1) / 4 + n, prec)
                                             - mp.pi) for n in range(6)), tol)

        z32 = zeta(mp.mpf(3) / 2, prec)
        self.note('zeta(3/2)', z32)
        self.check('zeta(3/2) partial-sum oracle', abs(z32 - zeta_partial_oracle(mp.mpf(3) / 2)) / z32, FLOAT_TOL)
        self.check('zeta vs mpmath', max(abs(zeta(s, prec) - mp.zeta(s)) / max(1, abs(mp.zeta(s)))
                                         for s in ZETA_POINTS), tol)

        self.check('bessel_j vs mpmath', max(abs(bessel_j(n, x, prec) - mp.besselj(n, x)) for n, x in BESSEL_POINTS),
                   tol)
        xs = [0.5, 4.0, 31.0, 250.0]
        self.check('bessel_j_array vs bessel_j', max(abs(v - float(bessel_j(11, x, prec)))
                                                     for x, v in zip(xs, bessel_j_array(11, xs))), FLOAT_TOL)
