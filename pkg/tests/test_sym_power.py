import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symlfun.hecke_forms import SatakeParams, hecke_eigenform, satake, satake_at
from symlfun.sym_power import (
    PrecisionError,
    coefficient_mp,
    dirichlet_coeffs,
    local_factor_coeffs,
    local_params,
    read_csv,
    write_csv,
)


def brute_divisor_k(k, m):
    if k == 1:
        return 1
    return sum(brute_divisor_k(k - 1, m // d) for d in range(1, m + 1) if m % d == 0)


def int_series_mul(a, b):
    n = len(a)
    return [sum(a[i] * b[j - i] for i in range(j + 1)) for j in range(n)]


class TestLocalParams:
    def test_trivial_power(self):
        assert local_params(0, satake(0.3, 2)).params == (1,)

    def test_first_power(self):
        s = satake(0.3, 2)
        assert local_params(1, s).params == (s.beta, s.alpha)

    def test_square_at_i(self):
        s = SatakeParams(1j, -1j, 3)
        assert sorted(local_params(2, s).params, key=lambda z: z.real) == pytest.approx([-1, -1, 1])

    @given(st.floats(-2, 2), st.integers(0, 12))
    def test_invariants(self, lam, n):
        lp = local_params(n, satake(lam, 5))
        assert len(lp) == n + 1
        assert abs(abs(np.prod(lp.params)) - 1) < 1e-9
        conj = sorted((z.conjugate() for z in lp.params), key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        orig = sorted(lp.params, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        assert np.allclose(conj, orig)


class TestLocalFactor:
    def test_zeta_factor(self):
        assert local_factor_coeffs([1], 3) == [1, 1, 1, 1]

    def test_first_coefficient_is_eigenvalue(self):
        s = satake(-0.53033, 2)
        c = local_factor_coeffs(local_params(1, s), 1)
        assert c == pytest.approx([1, -0.53033])

    def test_three_geometric_series(self):
        depth = 2
        geo = lambda g: [g**j for j in range(depth + 1)]
        oracle = int_series_mul(int_series_mul(geo(-1), geo(1)), geo(-1))
        # 1/((1+x)^2 (1-x)) = (1 - 2x + 3x^2)(1 + x + x^2) + O(x^3)
        assert oracle == [1, -1, 2]
        assert local_factor_coeffs([-1, 1, -1], depth) == pytest.approx(oracle)

    def test_rejects_non_conjugate_multiset(self):
        with pytest.raises(ValueError):
            local_factor_coeffs([1j], 2)

    @given(st.floats(0, math.pi), st.integers(0, 10))
    def test_depth_one_is_chebyshev(self, theta, n):
        s = SatakeParams(complex(math.cos(theta), math.sin(theta)), complex(math.cos(theta), -math.sin(theta)), 2)
        c1 = local_factor_coeffs(local_params(n, s), 1)[1]
        if abs(math.sin(theta)) > 1e-6:
            oracle = math.sin((n + 1) * theta) / math.sin(theta)
        else:
            oracle = (n + 1) * (math.cos(theta) ** n)
        assert c1 == pytest.approx(oracle, abs=1e-8)


class TestDirichletCoeffs:
    def test_zeta(self, delta_form):
        s = dirichlet_coeffs(0, delta_form, 50)
        assert np.all(s.coeffs[1:] == 1)

    def test_first_power_is_hecke(self, delta_form):
        s = dirichlet_coeffs(1, delta_form, 2000)
        assert np.max(np.abs(s.coeffs[1:] - delta_form.lam[1:2001])) < 1e-12

    def test_symmetric_square_at_two(self, delta_form):
        s = dirichlet_coeffs(2, delta_form, 4)
        assert s[2] == pytest.approx(delta_form.lam[2] ** 2 - 1, abs=1e-14)
        assert s[1] == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_divisor_majorant(self, delta_form, n):
        s = dirichlet_coeffs(n, delta_form, 300)
        for m in range(1, 301):
            assert abs(s[m]) <= brute_divisor_k(n + 1, m) + 1e-9

    @pytest.mark.parametrize("n", [2, 4])
    def test_multiplicative(self, weight16_form, n):
        X = 600
        s = dirichlet_coeffs(n, weight16_form, X)
        for a in range(2, 40):
            for b in range(2, X // a + 1):
                if math.gcd(a, b) == 1:
                    assert s[a * b] == pytest.approx(s[a] * s[b], abs=1e-9)

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_prime_coefficient_is_local_depth_one(self, delta_form, n):
        s = dirichlet_coeffs(n, delta_form, 200)
        for p in (2, 3, 5, 97, 199):
            c = local_factor_coeffs(local_params(n, satake_at(delta_form, p)), 1)
            assert s[p] == pytest.approx(c[1], abs=1e-12)

    def test_insufficient_eigenvalues(self):
        f = hecke_eigenform(12, 50)
        with pytest.raises(PrecisionError):
            dirichlet_coeffs(2, f, 100)

    def test_high_precision_agrees(self, delta_form):
        s = dirichlet_coeffs(3, delta_form, 1000)
        for m in (2, 12, 64, 360, 997):
            assert float(coefficient_mp(3, delta_form, m, 200)) == pytest.approx(s[m], abs=1e-11)


def test_csv_roundtrip(delta_form):
    s = dirichlet_coeffs(2, delta_form, 40)
    buf = io.StringIO()
    write_csv(s, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0].startswith("# label=") and lines[0].endswith("truncation=40")
    assert lines[1] == "m,lambda"
    back = read_csv(io.StringIO(buf.getvalue()))
    assert back.truncation == 40 and back.label == s.label
    assert np.array_equal(back.coeffs, s.coeffs)
