import math

import numpy as np
import pytest
from mpmath import mp

from src.afe.contour import SpectralWindow
from src.arithmetic.gsum import g_closed, g_closed_row
from src.errors import BudgetError, StationaryPointError, TruncationError
from src.offdiag.block import DyadicBlock, OscProbe, block_bump, bump_derivative_bounds
from src.offdiag.oscillatory import (kernel_grid, kernel_mass, stationary_phase_oracle, upsilon_direct,
                                     upsilon_oracle, upsilon_prefactor, upsilon_to_w, w_pm_integral)
from src.offdiag.poisson import (derivative_norms, desk_kernels, dual_tail_bound, regime_probe, s_direct,
                                 s_poisson, s_poisson_detail)
from src.specialfn.quadrature import PrecisionPolicy
from src.transforms.kernels import KernelFn, synthetic_kernel
from src.types import KernelShape, Regime, Sign

LOW = PrecisionPolicy(64, 16)

# Υ at its stationary point t0 = 28 = N·7/4, u/(M t0²) = 7/4
UPS_BLOCK = DyadicBlock(16, 16, 4)
UPS_U = 21952.0


@pytest.fixture(scope='module')
def matched_upsilon():
    return upsilon_direct(8, 16, 4, UPS_U, UPS_BLOCK, prec=LOW)


def gaussian_for(block):
    return desk_kernels(block)[0]


class TestBlock:
    def test_support(self):
        assert np.all(block_bump(np.array([0.2, 0.5, 3.0, 3.4])) == 0)
        assert block_bump(1.75) == 1.0
        assert block_bump(mp.mpf(1.75)) == 1

    def test_derivative_bounds(self):
        bounds = bump_derivative_bounds()
        assert len(bounds) == 7
        assert bounds[0] == pytest.approx(1.0, rel=1e-4)
        assert all(b > 0 for b in bounds)

    def test_lattice(self):
        block = DyadicBlock(8, 8, 4)
        assert block.cs() == [4, 5, 6, 7]
        assert list(block.ms()) == list(range(5, 24))

    @pytest.mark.parametrize('M,N,C', [(128, 8, 4), (8, 8, 32)])
    def test_desk_scale(self, M, N, C):
        block = DyadicBlock(M, N, C)
        with pytest.raises(BudgetError):
            block.require_desk()
        with pytest.raises(BudgetError):
            s_direct(block, Sign.plus, gaussian_for(DyadicBlock(8, 8, 4)))

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            DyadicBlock(0.5, 8, 4)


class TestOscProbe:
    def test_scale(self):
        probe = OscProbe(5, 2, 2, 16, 16)
        assert probe.X == 10

    def test_u_plus_u_minus(self):
        probe = OscProbe(5, 2, 2, 16, 16)
        assert probe.u_plus(10) == pytest.approx(probe.u_minus(10), rel=1e-12)
        assert probe.u_plus(20) != pytest.approx(probe.u_minus(20), rel=1e-3)

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            OscProbe(0, 2, 2, 16, 16)

    def test_regimes(self):
        window = SpectralWindow(10, 4)
        assert OscProbe(3, 4, 2, 4, 4).expected_regime(window) == Regime.plus
        assert OscProbe(-3, 4, 2, 4, 4).expected_regime(window) == Regime.negligible
        assert OscProbe(1, 2, 8, 16, 16, Sign.minus).expected_regime(window) == Regime.minus
        # |X1| M far from |X2| N
        assert OscProbe(400, 1, 2, 4, 4).expected_regime(window) == Regime.negligible


class TestStationaryPhase:
    def test_quadratic_phase(self):
        a, b, t0 = 2.0, 1e-12, 3.3
        value = stationary_phase_oracle(lambda t: a * (t - t0) ** 2, lambda t: mp.exp(-b * (t - t0) ** 2), (0, 10))
        exact = complex(mp.sqrt(mp.pi / mp.mpc(b, -a)))
        assert abs(value - exact) <= 1e-10 * abs(exact)

    def test_linear_phase(self):
        with pytest.raises(StationaryPointError):
            stationary_phase_oracle(lambda t: 5 * t, lambda t: mp.one, (0, 10))

    def test_two_stationary_points(self):
        with pytest.raises(StationaryPointError):
            stationary_phase_oracle(lambda t: mp.cos(t), lambda t: mp.one, (1, 8))


class TestUpsilon:
    def test_matched_magnitude(self, matched_upsilon):
        ratio = abs(matched_upsilon) / upsilon_prefactor(8, 16, 4, UPS_BLOCK)
        assert 0.1 <= ratio <= 10

    def test_oracle(self, matched_upsilon):
        oracle = upsilon_oracle(8, 16, 4, UPS_U, UPS_BLOCK)
        assert abs(abs(oracle) - abs(matched_upsilon)) <= 0.2 * abs(matched_upsilon)

    def test_sign_mismatch(self, matched_upsilon):
        value = upsilon_direct(8, -16, 4, UPS_U, UPS_BLOCK, prec=LOW)
        assert abs(value) <= 1e-6 * abs(matched_upsilon)

    @pytest.mark.slow
    def test_scale_mismatch(self, matched_upsilon):
        value = upsilon_direct(100, 1, 4, UPS_U, UPS_BLOCK, prec=LOW)
        assert abs(value) <= 1e-6 * abs(matched_upsilon)

    def test_outside_support(self):
        assert upsilon_direct(8, 16, 4, 1.0, UPS_BLOCK) == 0
        with pytest.raises(StationaryPointError):
            upsilon_oracle(8, 16, 4, 1.0, UPS_BLOCK)


class TestW:
    block = DyadicBlock(4, 4, 3)

    def test_conjugation(self):
        kernel = gaussian_for(self.block)
        a = w_pm_integral(1, 2, 3, kernel, self.block)
        b = w_pm_integral(-1, -2, 3, kernel, self.block)
        assert abs(a - b.conjugate()) <= 1e-8

    def test_zero_frequency(self):
        kernel = gaussian_for(self.block)
        value = w_pm_integral(0, 0, 3, kernel, self.block)
        assert abs(value.imag) <= 1e-10
        assert value.real == pytest.approx(kernel_mass(3, kernel, self.block), rel=1e-8)

    def test_decay(self):
        kernel = gaussian_for(self.block)
        mass = kernel_mass(3, kernel, self.block)
        # |x1| M / c = 32/3
        assert abs(w_pm_integral(8, 0, 3, kernel, self.block)) <= 1e-4 * mass

    @pytest.mark.slow
    def test_upsilon_route(self):
        block = DyadicBlock(1, 1, 1)
        kernel = synthetic_kernel(KernelShape.gaussian, center=20.0, width=40.0)
        assert upsilon_to_w(0, 0, 1, kernel, block, prec=LOW) == pytest.approx(
            w_pm_integral(0, 0, 1, kernel, block), rel=1e-8)


class TestGRow:
    @pytest.mark.parametrize('sign', [Sign.plus, Sign.minus])
    def test_matches_closed(self, sign):
        x2s = np.arange(-6, 7)
        for c in range(1, 13):
            for x1 in range(-5, 6):
                row = g_closed_row(x1, x2s, c, sign)
                expected = [g_closed(x1, int(x2), c, sign).value for x2 in x2s]
                assert np.allclose(row, expected, atol=1e-12)


class TestTailBound:
    def test_scaling(self):
        block = DyadicBlock(8, 8, 4)
        norms = derivative_norms(kernel_grid(block, 4, gaussian_for(block), 512, 512))
        assert norms.f > 0 and norms.d1 > 0
        base = dual_tail_bound(norms, 4, 10, 10)
        assert dual_tail_bound(norms, 4, 20, 20) == pytest.approx(base / 2 ** 5, rel=1e-12)

    def test_truncation_budget(self):
        block = DyadicBlock(8, 8, 4)
        with pytest.raises(TruncationError) as info:
            s_poisson_detail(block, Sign.plus, gaussian_for(block), tol=1e-300)
        assert info.value.bound > 0


class TestDirect:
    block = DyadicBlock(8, 8, 4)

    def test_zero_kernel(self):
        kernel = synthetic_kernel(KernelShape.gaussian, center=-1e4, width=1.0)
        assert s_direct(self.block, Sign.plus, kernel) == 0

    def test_linear(self):
        k1 = gaussian_for(self.block)
        k2 = synthetic_kernel(KernelShape.gaussian, center=100.0, width=30.0)
        both = KernelFn(KernelShape.gaussian, lambda x: k1.fn(x) + k2.fn(x), 0.0, math.inf, {},
                        lambda xs: k1.vfn(xs) + k2.vfn(xs))
        a, b = s_direct(self.block, Sign.plus, k1), s_direct(self.block, Sign.plus, k2)
        assert abs(s_direct(self.block, Sign.plus, both) - (a + b)) <= 1e-10 * (abs(a) + abs(b) + 1)

    def test_threads(self):
        kernel = gaussian_for(self.block)
        assert s_direct(self.block, Sign.minus, kernel, threads=4) == s_direct(self.block, Sign.minus, kernel)


class TestPoisson:
    @pytest.mark.parametrize('sign', [Sign.plus, Sign.minus])
    def test_identity(self, sign):
        block = DyadicBlock(8, 8, 4)
        kernel = gaussian_for(block)
        dual = s_poisson_detail(block, sign, kernel)
        assert dual.tail_bound <= 1e-6
        assert abs(s_direct(block, sign, kernel) - dual.value) <= 1e-6

    def test_phase_control(self):
        block = DyadicBlock(8, 8, 4)
        kernel = gaussian_for(block)
        corrupted = s_poisson_detail(block, Sign.plus, kernel, with_phase=False).value
        assert abs(s_direct(block, Sign.plus, kernel) - corrupted) >= 1e-2

    @pytest.mark.slow
    def test_phase_modulated(self):
        block = DyadicBlock(16, 16, 8)
        kernel = desk_kernels(block)[1]
        assert abs(s_direct(block, Sign.plus, kernel) - s_poisson(block, Sign.plus, kernel)) <= 1e-5


class TestRegimeProbe:
    window = SpectralWindow(10, 4)

    @pytest.mark.slow
    def test_plus_scale(self):
        report = regime_probe(OscProbe(3, 4, 2, 4, 4), self.window)
        assert report.expected == Regime.plus
        assert 0.1 <= report.ratio <= 10

    @pytest.mark.slow
    def test_sign_mismatch(self):
        report = regime_probe(OscProbe(-12, 16, 2, 4, 4), self.window)
        assert report.expected == Regime.negligible
        matched_scale = 2 * 4 * self.window.Delta / 16
        assert report.measured <= 1e-6 * matched_scale

    def test_u_values(self):
        probe = OscProbe(5, 2, 2, 16, 16)
        report_u = (probe.u_plus(self.window.T), probe.u_minus(self.window.T))
        assert report_u[0] == pytest.approx(report_u[1], rel=1e-12)
