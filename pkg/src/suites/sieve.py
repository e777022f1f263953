import numpy as np

from src.const import LS1_CONSTANT, LS2_CONSTANT
from src.sieve.largesieve import SievePlan, ls1_ratio, ls1_ratio_of, ls2_ratio, ls2_ratio_of, trial_array, trial_kind
from src.suites.suite import Suite

SCALING_TOL = 1e-12


class SieveSuite(Suite):
    """seeded large-sieve regressions in one and two dimensions with scaling invariance and a support control"""
    name = 'sieve-test'
    parameters = (
        ('trials', int, 1000, 'trials per inequality'),
        ('N', int, 256, 'one-dimensional length'),
        ('U', float, 1000.0, 'frequency range'),
        ('MN', int, 64, 'two-dimensional side M = N'),
    )

    def getName(self):
        return 'Large sieve'

    def solve(self):
        seed, threads, trials, U = self.config.seed, self.config.threads, self.params['trials'], self.params['U']
        one = SievePlan(N=self.params['N'], U=U, trials=trials, seed=seed)
        best, ratios = ls1_ratio(one, threads)
        self.note('ls1 mean ratio', float(np.mean(ratios)))
        self.check('ls1 max ratio', best, LS1_CONSTANT)

        side = self.params['MN']
        two = SievePlan(N=side, M=side, U=U, trials=trials, seed=seed, coprime_support=True)
        best, ratios = ls2_ratio(two, threads)
        self.note('ls2 mean ratio', float(np.mean(ratios)))
        self.check('ls2 max ratio', best, LS2_CONSTANT)

        a = trial_array(one, 1, trial_kind(0), seed)
        base = ls1_ratio_of(a, U)
        self.check('ls1 scaling', abs(ls1_ratio_of((0.3 - 1.7j) * a, U) - base) / base, SCALING_TOL)
        b = trial_array(two, 2, trial_kind(0), seed)
        base = ls2_ratio_of(b, U)
        self.check('ls2 scaling', abs(ls2_ratio_of(2 * b, U) - base) / base, SCALING_TOL)

        control = dict(N=8, M=8, U=U, trials=min(trials, 30), seed=seed)
        filtered, _ = ls2_ratio(SievePlan(coprime_support=True, **control), threads)
        unfiltered, _ = ls2_ratio(SievePlan(coprime_support=False, **control), threads)
        self.note('ls2 control without coprime support', unfiltered)
        self.check('control exceeds filtered', filtered, unfiltered, unfiltered > filtered)
