import math

import numpy as np
import pytest
from mpmath import mp

from src.afe.contour import SpectralWindow
from src.const import H_MINUS_MAGNITUDE_CONSTANT, H_PLUS_MAGNITUDE_CONSTANT
from src.errors import InsufficientPrecisionError, KernelRangeError
from src.specialfn.quadrature import PrecisionPolicy
from src.tracecheck.window import WeightWindow, bump
from src.transforms.bessel_transforms import (H_holo, H_holo_integral, H_holo_terms, H_minus, H_minus_nested,
                                              H_plus, H_plus_complex, H_plus_tail_bound, kernel_fn,
                                              minus_decay_probe, plus_decay_probe, plus_regime, probe_rows,
                                              transition_scan)
from src.transforms.kernels import h_weight, synthetic_kernel, t_window
from src.types import KernelShape, PhaseFunction, Regime

WINDOW = SpectralWindow(30, 4)
HOLO = WeightWindow(40, 8)


class TestWeight:
    def test_at_center(self):
        assert h_weight(30.0, WINDOW) == pytest.approx(1 + math.exp(-4 * 30 ** 2 / 4 ** 2), rel=1e-15)

    def test_even(self, rng):
        for t in rng.uniform(-80, 80, size=50):
            assert h_weight(t, WINDOW) == h_weight(-t, WINDOW)

    def test_far_tail(self):
        assert h_weight(30.0 + 40, WINDOW) <= math.exp(-100) + 1e-300

    def test_numpy_and_mp_agree(self):
        ts = np.array([10.0, 28.5, 33.0])
        for t, v in zip(ts, h_weight(ts, WINDOW)):
            assert float(h_weight(mp.mpf(t), WINDOW)) == pytest.approx(v, rel=1e-14)

    def test_window_covers_center(self):
        lo, hi = t_window(WINDOW, 1e-10)
        assert lo < 30 < hi
        assert H_plus_tail_bound(WINDOW) <= 1e-10


class TestHPlus:
    def test_decay_regime(self):
        assert abs(H_plus(1.0, WINDOW)) <= 1e-6 * WINDOW.T * WINDOW.Delta

    @pytest.mark.slow
    def test_decay_probe(self):
        value, peak, ratio = plus_decay_probe(WINDOW)
        assert ratio <= 1e-6

    def test_needs_precision(self):
        with pytest.raises(InsufficientPrecisionError):
            H_plus(200.0, WINDOW, prec=PrecisionPolicy(128, 32))

    def test_regimes(self):
        assert plus_regime(1.0, WINDOW) == Regime.negligible
        assert plus_regime(2000.0, WINDOW) == Regime.plus
        assert plus_regime(120.0, WINDOW) is None

    def test_scan_beyond_desk(self):
        rows = transition_scan([600.0], WINDOW)
        assert rows[0][0] == 600.0 and math.isnan(rows[0][1])

    @pytest.mark.slow
    def test_magnitude_regime(self):
        value = H_plus(400.0, WINDOW, prec=PrecisionPolicy(700, 32))
        assert abs(value) <= H_PLUS_MAGNITUDE_CONSTANT * WINDOW.T * WINDOW.Delta / math.sqrt(400)

    @pytest.mark.slow
    def test_realness(self, quad):
        prec = PrecisionPolicy(400, 32)
        value = H_plus_complex(200.0, WINDOW, prec=prec)
        assert abs(value.imag) <= quad.abs_tol
        assert value.real == pytest.approx(H_plus(200.0, WINDOW, prec=prec), abs=1e-8)


class TestHMinus:
    @pytest.mark.slow
    def test_off_support(self):
        value, peak, ratio = minus_decay_probe(WINDOW, 3000.0)
        assert ratio <= 1e-6

    @pytest.mark.slow
    def test_on_support_bound(self):
        assert abs(H_minus(30.0, WINDOW)) <= H_MINUS_MAGNITUDE_CONSTANT * 30 ** 1.1

    @pytest.mark.slow
    @pytest.mark.parametrize('x', [30.0, 60.0])
    def test_routes_agree(self, x):
        assert H_minus(x, WINDOW) == pytest.approx(H_minus_nested(x, WINDOW), rel=1e-6, abs=1e-8)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            H_minus(0.0, WINDOW)


class TestHHolo:
    def test_at_zero(self):
        assert H_holo(0.0, HOLO) == 0.0

    def test_contributing_weights(self):
        assert HOLO.weights() == [36, 40, 44, 48]

    def test_against_mpmath(self):
        direct = sum(bump((4 * k - 41) / 8) * float(mp.besselj(4 * k - 1, 20)) for k in range(9, 13))
        assert H_holo(20.0, HOLO) == pytest.approx(direct, rel=1e-12)

    def test_routes_agree(self):
        assert H_holo_integral(20.0, HOLO) == pytest.approx(H_holo(20.0, HOLO), abs=1e-8)

    def test_support(self):
        wide = H_holo_terms(20.0, HOLO, extra=3)
        assert len(wide) == 10
        assert math.fsum(v for _, v in wide) == H_holo(20.0, HOLO)


class TestKernelFn:
    def test_range_error(self):
        kernel = kernel_fn(KernelShape.hPlus, WINDOW, prec=PrecisionPolicy(128, 32))
        assert kernel.covers(60.0)
        with pytest.raises(KernelRangeError):
            kernel(100.0)

    def test_holo_kernel(self):
        kernel = kernel_fn(KernelShape.hHolo, HOLO)
        assert kernel(20.0) == H_holo(20.0, HOLO)

    def test_not_a_transform(self):
        with pytest.raises(ValueError):
            kernel_fn(KernelShape.gaussian, WINDOW)

    def test_holo_probe(self):
        rows = probe_rows(KernelShape.hHolo, [10.0, 20.0], HOLO)
        assert [r[0] for r in rows] == [10.0, 20.0]
        assert all(r[2] <= 1 for r in rows)


class TestSynthetic:
    def test_gaussian_center(self):
        assert synthetic_kernel(KernelShape.gaussian, center=10, width=2)(10) == 1.0

    def test_gaussian_range(self):
        kernel = synthetic_kernel(KernelShape.gaussian, hi=5.0)
        with pytest.raises(KernelRangeError):
            kernel(6.0)

    def test_phase_modulated_decays(self):
        kernel = synthetic_kernel(KernelShape.phaseModulated, T=10, Delta=2, phase=PhaseFunction.sinh, sign=-1)
        values = [kernel(x) for x in (5.0, 10.0, 15.0, 20.0, 40.0, 60.0)]
        assert all(math.isfinite(v) for v in values)
        assert abs(values[-1]) <= 1e-6 * max(abs(v) for v in values[:4])

    def test_concentrates(self):
        errors = []
        for width in (1.0, 0.1, 0.01):
            kernel = synthetic_kernel(KernelShape.gaussian, center=3.0, width=width)
            xs = np.linspace(3.0 - 10 * width, 3.0 + 10 * width, 4001)
            values = np.array([kernel(x) for x in xs]) * np.cos(xs)
            integral = np.sum(values) * (xs[1] - xs[0]) / (width * math.sqrt(math.pi))
            errors.append(abs(integral - math.cos(3.0)))
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] <= 1e-4

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            synthetic_kernel(KernelShape.phaseModulated, sign=2)
