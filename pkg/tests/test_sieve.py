import numpy as np
import pytest
from mpmath import mp

from src.const import LS1_CONSTANT, LS2_CONSTANT, SIEVE_EPS
from src.sieve.largesieve import (SievePlan, coprime_mask, f_constant, f_decay_bound, f_kernel, lattice, ls1_ratio,
                                  ls1_ratio_of, ls2_ratio, ls2_ratio_of, mollified_indicator, sieve_kernel, smoothstep,
                                  trial_array)
from src.types import SieveTrial


class TestKernel:
    def test_diagonal(self):
        assert sieve_kernel(0.0, 7.5) == 15.0

    def test_against_quadrature(self):
        exact = mp.quad(lambda u: mp.cos(0.3 * u), [-10, 10])
        assert float(sieve_kernel(0.3, 10)) == pytest.approx(float(exact), rel=1e-13)

    def test_lattice(self):
        ms, ns = lattice(4, 4)
        assert len(ms) == 11
        assert all(np.gcd(ms, ns) == 1)
        assert len(lattice(4, 4, coprime=False)[0]) == 16


class TestPlan:
    @pytest.mark.parametrize('kwargs', [dict(N=0), dict(N=4, U=0.5), dict(N=4, trials=0)])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            SievePlan(**kwargs)

    @pytest.mark.parametrize('kind', list(SieveTrial))
    def test_coprime_support(self, kind):
        plan = SievePlan(N=12, M=10, U=50, coprime_support=True)
        a = trial_array(plan, 2, kind, 7)
        assert a.shape == (10, 12)
        assert np.all(a[~coprime_mask(10, 12)] == 0)


class TestLS1:
    def test_single_coefficient(self):
        a = np.zeros(32, dtype=complex)
        a[5] = 1 + 2j
        assert ls1_ratio_of(a, 100) == pytest.approx(200 / 132, rel=1e-14)

    def test_zero(self):
        assert ls1_ratio_of(np.zeros(16), 10) == 0.0

    def test_scaling(self, rng):
        a = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        assert ls1_ratio_of(2 * a, 300) == pytest.approx(ls1_ratio_of(a, 300), rel=1e-14)
        assert ls1_ratio_of((0.3 - 1.7j) * a, 300) == pytest.approx(ls1_ratio_of(a, 300), rel=1e-12)

    def test_aligned(self):
        plan = SievePlan(N=128, U=500)
        ratio = ls1_ratio_of(trial_array(plan, 1, SieveTrial.aligned, 11), plan.U)
        assert 0 < ratio <= LS1_CONSTANT

    def test_seeded_suite(self):
        best, ratios = ls1_ratio(SievePlan(N=256, U=1000, trials=1000))
        assert len(ratios) == 1000
        assert best == max(ratios) <= LS1_CONSTANT

    def test_rejects_coprime_plan(self):
        with pytest.raises(ValueError):
            ls1_ratio(SievePlan(N=8, coprime_support=True))

    def test_threads_deterministic(self):
        plan = SievePlan(N=64, U=100, trials=30, seed=5)
        assert ls1_ratio(plan, threads=4) == ls1_ratio(plan)


class TestLS2:
    def test_single_entry(self):
        a = np.zeros((8, 8), dtype=complex)
        a[2, 4] = 1j
        expected = 2 * 50 / (64 ** SIEVE_EPS * (50 + 64))
        assert ls2_ratio_of(a, 50) == pytest.approx(expected, rel=1e-14)

    def test_filter(self):
        a = np.zeros((8, 8), dtype=complex)
        a[1, 3] = 1
        assert ls2_ratio_of(a, 50) == 0.0

    def test_random(self):
        best, _ = ls2_ratio(SievePlan(N=32, M=32, U=100, trials=60, coprime_support=True))
        assert best <= LS2_CONSTANT

    @pytest.mark.slow
    def test_seeded_suite(self):
        best, ratios = ls2_ratio(SievePlan(N=64, M=64, U=1000, trials=1000, coprime_support=True))
        assert len(ratios) == 1000
        assert best <= LS2_CONSTANT

    def test_control_without_filter(self):
        kwargs = dict(N=8, M=8, U=1000, trials=30)
        filtered, _ = ls2_ratio(SievePlan(coprime_support=True, **kwargs))
        control, _ = ls2_ratio(SievePlan(coprime_support=False, **kwargs))
        assert control > filtered

    def test_scaling(self, rng):
        a = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        assert ls2_ratio_of(2 * a, 200) == pytest.approx(ls2_ratio_of(a, 200), rel=1e-14)


class TestSmoothedKernel:
    U, Y = 100, 10

    def test_step(self):
        s = mp.mpf(3) / 10
        assert abs(smoothstep(s) + smoothstep(1 - s) - 1) <= mp.mpf(10) ** -30
        assert mollified_indicator(self.U, self.U, self.Y) == 1
        assert mollified_indicator(-self.U - self.Y, self.U, self.Y) == 0

    def test_at_one(self):
        value = f_kernel(1, self.U, self.Y)
        assert 2 * self.U - 2 * self.Y <= value <= 2 * self.U + 2 * self.Y
        # ∫ f = 2U + Y since smoothstep(s) + smoothstep(1 - s) = 1
        assert value == pytest.approx(2 * self.U + self.Y, rel=1e-10)

    def test_decay(self):
        value = f_kernel(2, self.U, self.Y, j=4)
        assert abs(value) <= f_decay_bound(2, self.Y, 4)
        assert f_decay_bound(2, self.Y, 4) == pytest.approx(f_constant(4) * self.Y ** -3 * 3 ** 4)

    def test_reciprocal(self):
        assert f_kernel(0.5, self.U, self.Y) == pytest.approx(f_kernel(2, self.U, self.Y), abs=1e-10)

    def test_rejects(self):
        with pytest.raises(ValueError):
            f_kernel(0, self.U, self.Y)
        with pytest.raises(ValueError):
            f_kernel(2, self.U, 0.5)
