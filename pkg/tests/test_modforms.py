import pytest

from src.errors import OutOfRangeError, UnsupportedWeightError
from src.modforms.eigenform import (dim1_cuspform, hecke_coefficient, hecke_extend, hecke_relation_residual,
                                    lambda_squares, normalized_lambda)
from src.modforms.qexpansion import QExpansion, delta_qexp, eisenstein_qexp
from src.const import SUPPORTED_WEIGHTS
from src.utils import tau


class TestQExpansion:
    def test_eisenstein_first_coefficients(self):
        assert eisenstein_qexp(4, 20)[1] == 240
        assert eisenstein_qexp(6, 20)[1] == -504

    def test_delta_coefficients(self):
        delta = delta_qexp(20)
        assert (delta[1], delta[2], delta[3]) == (1, -24, 252)

    def test_delta_from_eisenstein(self):
        e4 = eisenstein_qexp(4, 200)
        e6 = eisenstein_qexp(6, 200)
        assert (e4 ** 3 - e6 ** 2).exact_div(1728) == delta_qexp(200)

    def test_truncation_consistency(self):
        short = eisenstein_qexp(4, 30) * delta_qexp(30)
        long = eisenstein_qexp(4, 60) * delta_qexp(60)
        assert short == long

    def test_ring_ops(self):
        f = QExpansion([1, 2, 3], n_max=5)
        assert (f * 2)[2] == 6
        assert (f - f)[1] == 0
        assert (f ** 2)[2] == 2 * 3 + 2 * 2


class TestEigenforms:
    def test_weight_twelve_is_delta(self):
        form = dim1_cuspform(12, 50)
        assert form.a[2] == -24
        assert list(form.a) == [delta_qexp(50)[n] for n in range(51)]

    def test_weight_sixteen(self):
        assert dim1_cuspform(16, 30).a[2] == 216

    def test_unsupported(self):
        with pytest.raises(UnsupportedWeightError):
            dim1_cuspform(24, 30)

    def test_lambda_values(self, delta_form):
        assert normalized_lambda(delta_form, 1) == 1
        lam2 = normalized_lambda(delta_form, 2)
        assert normalized_lambda(delta_form, 4) == pytest.approx(lam2 ** 2 - 1, abs=1e-12)
        assert normalized_lambda(delta_form, 6) == pytest.approx(lam2 * normalized_lambda(delta_form, 3), abs=1e-12)

    def test_out_of_range(self, delta_form):
        with pytest.raises(OutOfRangeError):
            normalized_lambda(delta_form, delta_form.n_max + 1)

    @pytest.mark.slow
    @pytest.mark.parametrize('weight', SUPPORTED_WEIGHTS)
    def test_hecke_and_deligne(self, weight):
        form = dim1_cuspform(weight, 1000)
        assert hecke_relation_residual(form) < 1e-9
        for n in range(1, 1001):
            assert abs(form.lam[n]) <= tau(n) + 1e-12

    def test_exact_extension(self):
        short = dim1_cuspform(12, 40)
        long = dim1_cuspform(12, 400)
        assert long.a[:41] == short.a
        for n in (41, 49, 121, 169, 289, 361):
            assert hecke_coefficient(short, n) == long.a[n]

    def test_lambda_squares(self, delta_form):
        squares = lambda_squares(delta_form, 20)
        extended = hecke_extend(delta_form, 400)
        for n in range(1, 21):
            assert squares[n] == pytest.approx(extended[n * n], abs=1e-10)
            assert squares[n] == pytest.approx(delta_form.lam[n * n], abs=1e-10)
