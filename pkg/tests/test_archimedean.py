import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from symlfun.archimedean import (
    ARITHMETIC_CONDUCTOR,
    GammaFactor,
    analytic_conductor,
    conductor_majorant_limit,
    conductor_majorant_ratio,
    conductor_ratio_sweep,
    gamma_degree,
    gamma_factors,
    log_analytic_conductor,
    log_conductor_aux,
    log_conductor_bound,
    sweep_row,
    log_k_endpoint,
    zero_free_endpoint,
)

weights = st.integers(6, 200).map(lambda h: 2 * h)


class TestGammaFactors:
    def test_odd_first(self):
        assert gamma_factors(1, 12) == [GammaFactor("complex", 5.5)]
        assert gamma_factors(1, 20) == [GammaFactor("complex", 9.5)]

    def test_sym2(self):
        assert gamma_factors(2, 12) == [GammaFactor("real", 1.0), GammaFactor("complex", 11.0)]

    def test_zeta(self):
        assert gamma_factors(0, 12) == [GammaFactor("real", 0.0)]

    def test_sym4_has_no_delta(self):
        assert gamma_factors(4, 12)[0] == GammaFactor("real", 0.0)

    @pytest.mark.parametrize("n", range(0, 201))
    def test_degree(self, n):
        assert gamma_degree(gamma_factors(n, 12)) == n + 1


class TestConductor:
    def test_examples(self):
        assert analytic_conductor(2, 12) == 312
        assert analytic_conductor(1, 12) == 48.75
        assert analytic_conductor(4, 12) == 86112
        assert ARITHMETIC_CONDUCTOR == 1

    @given(st.integers(1, 40), weights)
    def test_even_matches_displayed_product(self, m, k):
        display = (1 + m % 2) * math.prod((j * (k - 1) + 1) * (j * (k - 1) + 2) for j in range(1, m + 1))
        assert math.log(analytic_conductor(2 * m, k)) == pytest.approx(math.log(display), rel=1e-12)

    @given(st.integers(0, 40), weights)
    def test_odd_convention(self, m, k):
        display = sum(math.log(((j + 0.5) * (k - 1) + 1) * ((j + 0.5) * (k - 1) + 2)) for j in range(m + 1))
        assert log_analytic_conductor(2 * m + 1, k) == pytest.approx(display, rel=1e-12)

    def test_evaluation_point(self):
        assert analytic_conductor(2, 12, s=1) == (1 + 2) * (12 + 1) * (13 + 1)

    def test_log_bounds(self):
        exact, bound = log_conductor_bound(2, 12)
        assert exact == pytest.approx(5.743, abs=5e-4)
        assert bound == pytest.approx(4.970, abs=5e-4)
        assert log_conductor_bound(1, 12)[0] == pytest.approx(3.887, abs=5e-4)

    def test_ratio_bounded(self):
        rep = conductor_ratio_sweep(30, 400)
        assert rep["argmax"] == (1, 12)
        assert 2.1 < rep["constant"] < 2.2

    def test_aux_bound_ratio(self):
        ratios = [log_conductor_aux(n, k)[0] / log_conductor_aux(n, k)[1] for n in range(1, 21) for k in (12, 24, 100, 400)]
        assert max(ratios) < 100


class TestMajorant:
    @pytest.mark.parametrize("k", [12, 14, 16, 24, 50, 100, 400])
    def test_ratio_under_provable_limit(self, k):
        for m in range(1, 40):
            assert conductor_majorant_ratio(m, k) <= conductor_majorant_limit(m, k) * (1 + 1e-12)

    def test_limit_tends_to_parity_factor(self):
        assert conductor_majorant_limit(3, 10**9) == pytest.approx(2.0, rel=1e-8)
        assert conductor_majorant_limit(2, 10**9) == pytest.approx(1.0, rel=1e-8)

    def test_constant_two_is_not_enough(self):
        # at m = 1 the ratio is 2 k (k+1) / (k-1)^2 > 2 for every k
        for k in (14, 100, 1000):
            assert conductor_majorant_ratio(1, k) == pytest.approx(2 * k * (k + 1) / (k - 1) ** 2)
            assert conductor_majorant_ratio(1, k) > 2

    def test_minimal_constant_weight_12(self):
        assert max(conductor_majorant_ratio(m, 12) for m in range(1, 4)) == pytest.approx(3.214, abs=1e-3)
        assert conductor_majorant_ratio(1, 12) == pytest.approx(2.579, abs=1e-3)

    @pytest.mark.parametrize("k", [12, 100])
    def test_no_uniform_constant(self, k):
        # the ratio grows like m^(3/(k-1)), so any fixed constant fails for large m
        odd = [conductor_majorant_ratio(m, k) for m in range(1, 200, 2)]
        assert all(b > a for a, b in zip(odd, odd[1:]))
        assert odd[-1] / odd[0] == pytest.approx(199 ** (3 / (k - 1)), rel=0.2)


class TestEndpoints:
    def test_examples(self):
        assert zero_free_endpoint(1, 12, 1).left_endpoint == pytest.approx(0.5976, abs=5e-5)
        # 1 - 1/(16 log 24) = 0.9803339..., which the rounded example quotes as 0.98034
        assert zero_free_endpoint(2, 12, 1).left_endpoint == pytest.approx(1 - 1 / (16 * math.log(24)), rel=1e-15)
        assert zero_free_endpoint(2, 12, 1).left_endpoint == pytest.approx(0.98033, abs=5e-6)

    def test_limit(self):
        assert zero_free_endpoint(10**4, 12).left_endpoint > 1 - 1e-16

    @given(st.integers(1, 50), weights, st.floats(0.01, 10))
    def test_monotone(self, n, k, c):
        e = zero_free_endpoint(n, k, c).left_endpoint
        assert e < 1
        assert zero_free_endpoint(n + 1, k, c).left_endpoint > e or e > 1 - 1e-15
        assert zero_free_endpoint(n, k + 2, c).left_endpoint > e or e > 1 - 1e-15

    def test_records_constant(self):
        z = zero_free_endpoint(3, 16, 0.25)
        assert (z.c, z.n, z.k, z.form) == (0.25, 3, 16, "explicit_n")

    def test_log_k_form(self):
        z = log_k_endpoint(2, 12, 0.5)
        assert z.left_endpoint == pytest.approx(1 - 0.5 / math.log(12))
        assert z.form == "log_k"

    @pytest.mark.parametrize("args", [(0, 12, 1), (1, 10, 1), (1, 12, 0)])
    def test_rejects(self, args):
        with pytest.raises(ValueError):
            zero_free_endpoint(*args)


def test_sweep_row():
    row = sweep_row(2, 12)
    assert list(row) == ["n", "k", "Q", "log_Q", "bound", "endpoint"]
    assert row["Q"] == 312
