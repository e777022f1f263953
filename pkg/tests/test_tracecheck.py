import math

import numpy as np
import pytest

from src.afe.contour import SpectralWindow
from src.afe.lvalues import harmonic_weight, l_half_holo, l_half_sym2_holo
from src.const import S_HOLO_CONSTANT, SUPPORTED_WEIGHTS
from src.errors import TruncationError, UnsupportedWeightError
from src.mainterm.diagonal import h_plain_closed
from src.tracecheck.kuznetsov import (continuous_integrand, continuous_spectrum_detail, continuous_spectrum_term,
                                      kuznetsov_H, kuznetsov_rhs, omega)
from src.tracecheck.petersson import (certified_c_max, kloosterman_tail, mixed_moment_direct_holo,
                                      mixed_moment_tf_holo, moment_per_weight, petersson_check, petersson_grid,
                                      petersson_sign, petersson_tail)
from src.tracecheck.report import MomentReport
from src.tracecheck.window import WeightWindow, bump
from src.types import OmegaConvention

ONLY_12 = WeightWindow(12, 2)
THREE = WeightWindow(15, 8)
WINDOW = SpectralWindow(30, 4)


@pytest.fixture(scope='module')
def tf_12():
    return mixed_moment_tf_holo(ONLY_12)


class TestWindow:
    def test_bump(self):
        assert bump(0.0) == 1.0
        assert bump(1.0) == 0.0
        assert np.all(bump(np.array([-2.0, 1.5, 3.0])) == 0)

    def test_support(self):
        assert ONLY_12.weights() == [12]
        assert THREE.weights() == [12, 16, 20]
        assert WeightWindow(13, 1).weights() == []

    def test_rejects(self):
        with pytest.raises(ValueError):
            WeightWindow(8, 2)
        with pytest.raises(ValueError):
            WeightWindow(20, 0.5)


class TestReport:
    def test_pass_iff_within_tolerance(self):
        assert MomentReport(1.0, 1.0 + 1e-9, tolerance=1e-8).passed
        assert not MomentReport(1.0, 1.1, tolerance=1e-8).passed
        assert MomentReport(None, 3.0).passed is None

    def test_as_dict(self):
        out = MomentReport(1.0, 2.0, {'a': 1.0}, {'b': 0.5}, 2.0, ('x',)).as_dict()
        assert out['pass'] is True
        assert out['difference'] == 1.0
        assert out['flags'] == ['x']


class TestKloostermanTail:
    def test_monotone(self):
        tails = [petersson_tail(12, 3, 5, c) for c in (25, 50, 100, 200)]
        assert all(a > b for a, b in zip(tails, tails[1:]))

    def test_power_regime(self):
        # c_max beyond A/x1: only the power part remains, scaling as c^(2-w)
        assert kloosterman_tail(10.0, 1, 12, 200) / kloosterman_tail(10.0, 1, 12, 100) == pytest.approx(2 ** -10)

    def test_vectorized(self):
        A = np.array([5.0, 50.0, 500.0])
        out = kloosterman_tail(A, np.array([1, 2, 4]), 16, 50)
        assert out.shape == (3,)
        assert out[2] > out[1] > out[0]

    def test_certified_c_max(self):
        c_max = certified_c_max(12, 20, 20)
        assert petersson_tail(12, 20, 20, c_max) <= 5e-9
        assert petersson_tail(12, 20, 20, c_max // 2) > 5e-9


class TestPetersson:
    @pytest.mark.parametrize('n,m', [(1, 1), (1, 2)])
    def test_weight_12(self, n, m):
        report = petersson_check(12, n, m, c_max=50)
        assert abs(report.lhs - report.rhs) <= 1e-8
        assert report.passed

    def test_delta_term(self):
        report = petersson_check(12, 1, 2, c_max=50)
        assert report.terms['delta'] == 0.0
        assert report.terms['c=1'] != 0.0

    @pytest.mark.parametrize('weight', [16, 18, 22])
    def test_other_weights(self, weight):
        report = petersson_check(weight, 2, 3, c_max=None)
        assert report.passed

    def test_sign(self):
        assert [petersson_sign(w) for w in SUPPORTED_WEIGHTS] == [1, 1, -1, 1, -1, -1]

    def test_unsupported(self):
        with pytest.raises(UnsupportedWeightError):
            petersson_check(14, 1, 1)

    def test_tail_budget(self):
        with pytest.raises(TruncationError) as info:
            petersson_check(12, 20, 20, c_max=2)
        assert info.value.bound > 5e-9

    @pytest.mark.slow
    def test_grid(self):
        reports = petersson_grid(n_max=20)
        assert len(reports) == 6 * 210
        assert all(r.passed and r.difference <= 1e-8 for r in reports.values())


class TestDirectMoment:
    def test_single_weight(self, delta_form):
        value = harmonic_weight(delta_form) * l_half_holo(delta_form) * l_half_sym2_holo(delta_form)
        expected = bump(-0.5) * value
        assert ONLY_12.h_k(3) == bump(-0.5)
        assert mixed_moment_direct_holo(ONLY_12) == pytest.approx(expected, rel=1e-10)

    def test_empty(self):
        assert mixed_moment_direct_holo(WeightWindow(13, 1)) == 0

    def test_partition(self):
        parts = moment_per_weight(THREE)
        assert sorted(parts) == [12, 16, 20]
        assert mixed_moment_direct_holo(THREE) == pytest.approx(math.fsum(parts.values()), rel=1e-14)

    def test_unsupported_weight(self):
        with pytest.raises(UnsupportedWeightError):
            mixed_moment_direct_holo(WeightWindow(23, 2))


class TestTraceMoment:
    def test_two_routes(self, tf_12):
        assert abs(tf_12.lhs - tf_12.rhs) <= 1e-5
        assert tf_12.passed

    def test_breakdown(self, tf_12):
        assert tf_12.terms['diagonal'] + tf_12.terms['offdiagonal'] == pytest.approx(tf_12.rhs, rel=1e-14)
        assert tf_12.tolerance >= tf_12.tail_total

    def test_offdiagonal_size(self, tf_12):
        M, N = tf_12.terms['m_terms w=12'], tf_12.terms['n_terms w=12']
        assert abs(tf_12.terms['offdiagonal']) <= S_HOLO_CONSTANT * math.sqrt(M * N) * 12 ** 0.05

    @pytest.mark.slow
    def test_doubled_truncations(self, tf_12):
        doubled = mixed_moment_tf_holo(ONLY_12, c_max=100, multiplier=2.0)
        assert abs(doubled.rhs - tf_12.rhs) <= tf_12.tolerance

    @pytest.mark.slow
    def test_three_weights(self):
        report = mixed_moment_tf_holo(THREE)
        assert report.passed


class TestKuznetsov:
    def test_H(self):
        assert kuznetsov_H(WINDOW) == pytest.approx(2 / math.pi * h_plain_closed(WINDOW), rel=1e-8)

    @pytest.mark.slow
    def test_off_diagonal_drops_delta(self):
        report = kuznetsov_rhs(WINDOW, 1, 2, c_max=1)
        assert report.terms['diagonal'] == 0
        assert report.passed is None

    @pytest.mark.slow
    def test_c_sum_converges(self):
        report = kuznetsov_rhs(WINDOW, 1, 1, c_max=3)
        assert report.terms['diagonal'] == pytest.approx(report.terms['H'] / 2)
        assert report.terms['last_c'] <= 1e-8 * abs(report.rhs)

    def test_rejects(self):
        with pytest.raises(ValueError):
            kuznetsov_rhs(WINDOW, 0, 1)


class TestContinuousSpectrum:
    window = SpectralWindow(10, 2)

    @pytest.mark.parametrize('t', [0.7, 3.2, 11.5])
    def test_even(self, t):
        assert continuous_integrand(t, self.window) == pytest.approx(continuous_integrand(-t, self.window),
                                                                      rel=1e-12)

    def test_omega(self):
        assert omega(5.0, OmegaConvention.unit) == 1.0
        assert 0 < omega(5.0) < 2 * math.pi * 4

    def test_cauchy_schwarz(self):
        detail = continuous_spectrum_detail(self.window)
        assert math.isfinite(detail.value) and detail.value != 0
        assert abs(detail.value) <= detail.cauchy_schwarz_bound
        assert detail.flag == 'omega=zeta1'

    def test_term(self):
        assert continuous_spectrum_term(self.window) == continuous_spectrum_detail(self.window).value
        unit = continuous_spectrum_term(self.window, OmegaConvention.unit)
        assert math.isfinite(unit) and unit != continuous_spectrum_term(self.window)

    @pytest.mark.slow
    def test_delta_scaling(self):
        narrow = continuous_spectrum_detail(SpectralWindow(40, 5)).value
        wide = continuous_spectrum_detail(SpectralWindow(40, 10)).value
        assert 0.5 <= wide / narrow / 2 <= 2
