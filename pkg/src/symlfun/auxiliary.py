"""Auxiliary L-functions D(s) = L(s, Pi x Pi) as formal products of symmetric powers.

For even n, Pi = 1 + Sym^n; for odd n, Pi = 1 + Sym^n + Sym^(n+1) (isobaric sums).
D is kept as a multiset of (symmetric-power index, multiplicity), so degree and
pole bookkeeping are exact; coefficients are expanded only on demand.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import mpmath
import numpy as np

from ._arith import assemble_multiplicative, dirichlet_convolve, max_depth, primes_up_to
from .hecke_forms import Eigenform, satake
from .sym_power import (
    DirichletSeries,
    _angles,
    _coefficient_mp_factors,
    _geometric_product,
    _real_part,
    dirichlet_coeffs,
    local_factor_coeffs,
    local_params,
    series_from_params,
    sym_power_gammas,
)

DEFAULT_TOL = 1e-9
DEFAULT_BITS = 256


@dataclass(frozen=True)
class FactorMultiset:
    factors: tuple[tuple[int, int], ...]  # sorted (sym_index, multiplicity)

    @classmethod
    def from_counter(cls, c: Counter) -> "FactorMultiset":
        return cls(tuple(sorted((k, v) for k, v in c.items() if v > 0)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @property
    def pole_order(self) -> int:
        return self.as_dict().get(0, 0)

    @property
    def total_degree(self) -> int:
        return sum((i + 1) * m for i, m in self.factors)

    @property
    def factor_count(self) -> int:
        return sum(m for _, m in self.factors)

    def multiplicity(self, index: int) -> int:
        return self.as_dict().get(index, 0)


def isobaric_components(n: int) -> tuple[int, ...]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return (0, n) if n % 2 == 0 else (0, n, n + 1)


def factor_multiset(n: int) -> FactorMultiset:
    """Symmetric-power factorisation of D(s) for the given n, multiplicities merged."""
    if n < 1:
        raise ValueError("factor_multiset needs n >= 1")
    c: Counter = Counter()
    if n % 2 == 0:
        c[0] += 2
        c[n] += 3
        for i in range(1, n + 1):
            if 2 * i != n:
                c[2 * i] += 1
    else:
        c[0] += 3
        c[n] += 4
        c[n + 1] += 2
        for i in range(1, n + 1):
            c[2 * i] += 1
        for j in range(n + 1):
            if 2 * j + 1 != n:
                c[2 * j + 1] += 2
        for k in range(1, n + 2):
            c[2 * k] += 1
    return FactorMultiset.from_counter(c)


def pole_order(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    order = 2 if n % 2 == 0 else 3
    assert order == factor_multiset(n).pole_order
    return order


def target_multiplicity(n: int) -> int:
    """Order to which a real zero of L(s, Sym^n f) would divide D(s)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mult = 3 if n % 2 == 0 else 4
    assert mult == factor_multiset(n).multiplicity(n)
    assert mult > pole_order(n)
    return mult


def expected_degree(n: int) -> int:
    return (n + 2) ** 2 if n % 2 == 0 else (2 * n + 4) ** 2


def _local_power_series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    depth = a.shape[1] - 1
    out = np.zeros_like(a)
    for j in range(depth + 1):
        out[:, j] = (a[:, : j + 1] * b[:, j::-1]).sum(axis=1)
    return out


def expand_coeffs(n: int, f: Eigenform, X: int) -> DirichletSeries:
    """Dirichlet coefficients of D(s) = prod L(s, Sym^i)^mult over factor_multiset(n).

    Each factor's local series is raised to its multiplicity and multiplied as a
    power series in p^(-s) prime by prime, then assembled multiplicatively.
    """
    fm = factor_multiset(n)
    primes = primes_up_to(X)
    depth = max_depth(2, X) if X >= 2 else 0
    theta = _angles(f, primes)
    local = np.zeros((primes.size, depth + 1))
    local[:, 0] = 1
    for index, mult in fm.factors:
        factor = _real_part(_geometric_product(sym_power_gammas(index, theta), depth), 1e-9)
        for _ in range(mult):
            local = _local_power_series_mul(local, factor)
    return DirichletSeries(assemble_multiplicative(local, X), X, f"D_{n} ({f.label})")


def expand_by_convolution(n: int, f: Eigenform, X: int) -> np.ndarray:
    """Same series as expand_coeffs, by global Dirichlet convolution of the factor series."""
    out = np.zeros(X + 1)
    out[1] = 1
    for index, mult in factor_multiset(n).factors:
        c = dirichlet_coeffs(index, f, X).coeffs
        for _ in range(mult):
            out = dirichlet_convolve(out, c)
    return out


def rankin_selberg_square(n: int, f: Eigenform, X: int) -> DirichletSeries:
    """D(s) straight from the pairwise products of Pi's local parameters."""
    theta = _angles(f, primes_up_to(X))
    pi = np.concatenate([sym_power_gammas(i, theta) for i in isobaric_components(n)], axis=1)
    pairs = (pi[:, :, None] * pi[:, None, :]).reshape(theta.size, pi.shape[1] ** 2)
    return series_from_params(pairs, X, f"Pi x Pi, n={n}")


def coefficient_mp(n: int, f: Eigenform, m: int, bits: int = DEFAULT_BITS):
    """lambda_D(m) in mpmath, factor by factor, for sign rechecks near zero."""
    fm = factor_multiset(n)

    def local(p, v):
        s = satake(f.lam_mp(p), p)
        total = [mpmath.mpf(1)] + [mpmath.mpf(0)] * v
        for index, mult in fm.factors:
            c = local_factor_coeffs(local_params(index, s), v, tol=mpmath.mpf(2) ** (-bits // 2))
            for _ in range(mult):
                total = [mpmath.fsum(total[i] * c[j - i] for i in range(j + 1)) for j in range(v + 1)]
        return total[v]

    with mpmath.workprec(bits):
        return _coefficient_mp_factors(m, local)


def check_nonneg(
    series: DirichletSeries,
    tol: float = DEFAULT_TOL,
    recheck=None,
) -> dict:
    """Pass iff every coefficient is >= -tol.

    ``recheck(m)`` may recompute a coefficient at high precision; it is applied to
    every negative entry and replaces the double-precision value in the verdict.
    """
    vals = np.array(series.coeffs[1:], dtype=float)
    rechecked = {}
    if recheck is not None:
        for idx in np.flatnonzero(vals < 0):
            m = int(idx) + 1
            hp = recheck(m)
            rechecked[m] = float(hp)
            vals[idx] = float(hp)
    i = int(np.argmin(vals)) if vals.size else 0
    min_coeff = float(vals[i]) if vals.size else float("inf")
    return {
        "min_coeff": min_coeff,
        "argmin": i + 1,
        "pass": bool(min_coeff >= -tol),
        "rechecked": len(rechecked),
    }


def positivity_report(n: int, f: Eigenform, X: int, tol: float = DEFAULT_TOL, bits: int = DEFAULT_BITS) -> dict:
    series = expand_coeffs(n, f, X)
    rep = check_nonneg(series, tol, recheck=lambda m: coefficient_mp(n, f, m, bits))
    return {"n": n, "weight": f.weight, "X": X, **rep}
