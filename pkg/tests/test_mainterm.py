import math

import pytest
from mpmath import mp

from src.afe.contour import ContourSpec, SpectralWindow
from src.mainterm.constants import a4_rederived, c_p, constants
from src.mainterm.diagonal import (a2_reduction, diagonal_holo, diagonal_holo_asymptotic, diagonal_holo_terms,
                                   diagonal_maass, diagonal_maass_detail, h_plain_closed, holo_theorem_form,
                                   window_integrals)
from src.mainterm.pfunction import (p_asymptotic, p_contour, p_numeric, p_numeric_detail, p_residual_envelope,
                                    p_residue, p_series_detail, residual_slope, slope_in_band)
from src.specialfn.quadrature import PrecisionPolicy
from src.tracecheck.window import WeightWindow


class TestConstants:
    def test_a1(self):
        assert constants().a1 == pytest.approx(2 / math.pi * float(mp.zeta(1.5)), rel=1e-14)

    def test_a3_over_a1(self):
        c = constants()
        assert c.a3 / c.a1 == pytest.approx(math.pi, rel=1e-14)

    def test_c_p_two_routes(self):
        assert abs(c_p(closed=True) - c_p(closed=False)) <= 1e-12

    def test_a2_rederived(self):
        c = constants()
        assert c.a2 == pytest.approx(4 / math.pi * c.c_P, rel=1e-12)

    def test_a4_rederived(self):
        assert a4_rederived() == pytest.approx(constants().a4, rel=1e-12)

    def test_stable_across_precision(self):
        lo, hi = constants(PrecisionPolicy(128, 32)), constants(PrecisionPolicy(256, 32))
        for name in ('a1', 'a2', 'a3', 'a4', 'c_P'):
            assert abs(getattr(lo, name) - getattr(hi, name)) <= 1e-12


class TestP:
    def test_real(self, quad):
        value, _ = p_numeric_detail(100)
        assert abs(value.imag) <= quad.abs_tol

    def test_rejects_small_t(self):
        with pytest.raises(ValueError):
            p_numeric(5)

    def test_needs_mollifier(self):
        with pytest.raises(ValueError):
            p_numeric(100, p_contour(mollifier_scale=0.0))

    def test_height_doubling(self):
        base = p_numeric(100)
        doubled = p_numeric(100, ContourSpec(sigma=0.5, height=2 * math.log(100) ** 2, mollifier_scale=1.0))
        assert abs(base - doubled) <= 1e-8

    def test_independent_of_line(self):
        assert p_numeric(100, p_contour(sigma=0.25)) == pytest.approx(p_numeric(100), abs=1e-8)

    def test_series_route(self):
        value, terms, tail = p_series_detail(100)
        assert tail <= 1e-12
        assert value == pytest.approx(p_numeric(100), abs=1e-8)

    def test_residue_matches_closed_form(self):
        residue, spread = p_residue(100)
        assert spread <= 1e-20
        assert residue == pytest.approx(p_asymptotic(100), abs=1e-12)

    @pytest.mark.parametrize('t', [100, 1000])
    def test_residual_envelope(self, t):
        assert abs(p_numeric(t) - p_asymptotic(t)) <= p_residual_envelope(t)

    @pytest.mark.slow
    def test_residual_envelope_large_t(self):
        assert abs(p_numeric(1e4) - p_asymptotic(1e4)) <= p_residual_envelope(1e4)

    def test_slope(self):
        ts = [100, 1000, 10000]
        assert residual_slope(ts, [t ** -0.25 for t in ts]) == pytest.approx(-0.25)
        assert slope_in_band(-0.25) and not slope_in_band(0.5)


class TestWindowIntegrals:
    window = SpectralWindow(1000, 10)

    def test_plain(self):
        _, h_plain = window_integrals(self.window)
        scale = math.sqrt(math.pi) * 10 * 1000
        assert abs(h_plain - scale) / scale <= 1e-8
        assert h_plain == pytest.approx(h_plain_closed(self.window), rel=1e-10)

    def test_log(self):
        h_log, _ = window_integrals(self.window)
        assert abs(h_log - math.sqrt(math.pi) * 10 * 1000 * math.log(1000)) <= 10 ** 2 * math.log(1000)

    def test_delta_scaling(self):
        _, one = window_integrals(self.window)
        _, two = window_integrals(SpectralWindow(1000, 20))
        assert two == pytest.approx(2 * one, rel=1e-6)

    def test_a2_reduction(self):
        reduction = a2_reduction(self.window)
        assert reduction['a2'] == pytest.approx(constants().a2, rel=1e-9)
        assert abs(reduction['tanh']) < 1e-100

    def test_a2_reduction_keeps_tanh_term(self):
        reduction = a2_reduction(SpectralWindow(10, 5))
        assert reduction['tanh'] > 1e-6
        assert reduction['a2'] == pytest.approx(constants().a2, rel=1e-9)


class TestMaassDiagonal:
    @pytest.mark.slow
    def test_against_asymptotic(self):
        report = diagonal_maass(SpectralWindow(500, 20))
        assert report.bound_ratio <= 10
        assert abs(report.numeric - report.without_tanh) <= math.exp(-2 * math.pi * 300) * abs(report.numeric)

    @pytest.mark.slow
    def test_truncation_stable(self):
        window = SpectralWindow(500, 20)
        a = diagonal_maass_detail(window)[0]
        b = diagonal_maass_detail(window, multiplier=2)[0]
        assert a == pytest.approx(b, rel=1e-8)


class TestHoloDiagonal:
    def test_against_asymptotic(self):
        report = diagonal_holo(WeightWindow(100, 16))
        assert report.bound_ratio <= 10

    def test_theorem_form(self):
        window = WeightWindow(100, 16)
        assert diagonal_holo_asymptotic(window) == pytest.approx(holo_theorem_form(window), rel=1e-10)

    def test_empty_support(self):
        window = WeightWindow(100, 1)
        assert window.ks() == []
        assert diagonal_holo(window).numeric == 0.0

    def test_center_shift(self):
        a, b = WeightWindow(100, 16), WeightWindow(104, 16)
        assert b.ks() == [k + 1 for k in a.ks()]
        assert [b.h_k(k + 1) for k in a.ks()] == [a.h_k(k) for k in a.ks()]

    def test_terms_positive_on_support(self):
        terms = diagonal_holo_terms(WeightWindow(100, 16))
        assert all(v >= 0 for v in terms.values())
