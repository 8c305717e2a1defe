"""Checks that L(s, Sym^n x Sym^(n+r)) = prod_{i=0}^n L(s, Sym^(2i+r)).

The identity is tested three ways: as an equality of integer exponent multisets,
of complex local parameters at a single prime, and of Dirichlet coefficients
where the two sides are expanded by unrelated code paths.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from ._arith import dirichlet_convolve, primes_up_to
from .hecke_forms import Eigenform, SatakeParams
from .sym_power import _angles, dirichlet_coeffs, local_params, series_from_params, sym_power_gammas


class ExponentMultiset(Counter):
    """Integer multiset; equality is multiplicity-aware and order free."""

    @property
    def cardinality(self) -> int:
        return sum(self.values())

    def shift(self, c: int) -> "ExponentMultiset":
        return ExponentMultiset({k + c: v for k, v in self.items()})

    def union(self, other: Iterable[int]) -> "ExponentMultiset":
        out = ExponentMultiset(self)
        out.update(other)
        return out


@dataclass
class Report:
    n: int
    r: int
    level: str
    passed: bool
    max_deviation: float
    cardinality: int

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def multiset_A(n: int, r: int) -> ExponentMultiset:
    return ExponentMultiset(n - i - j for i in range(n + 1) for j in range(n + r + 1))


def multiset_B(n: int, r: int) -> ExponentMultiset:
    return ExponentMultiset(m - l for m in range(n + 1) for l in range(2 * m + r + 1))


def induction_tail(n: int, r: int) -> ExponentMultiset:
    """``{-n-r-1, (-n-r)^2, ..., (-r)^2, -r+1, ..., 0}``: what joins ``A_{n,r}+1`` at step n+1."""
    tail = ExponentMultiset({-n - r - 1: 1})
    for v in range(-n - r, -r + 1):
        tail[v] += 2
    for v in range(-r + 1, 1):
        tail[v] += 1
    return tail


def check_induction_step(n: int, r: int) -> tuple[bool, bool]:
    """The two displayed recursions ``X_{n+1,r} = (X_{n,r}+1) u tail`` for X = A, B."""
    tail = induction_tail(n, r)
    a_ok = multiset_A(n + 1, r) == multiset_A(n, r).shift(1).union(tail.elements())
    b_ok = multiset_B(n + 1, r) == multiset_B(n, r).shift(1).union(tail.elements())
    return a_ok, b_ok


def verify_multiset_identity(n_max: int, r_max: int) -> dict:
    """Exhaustive ``A_{n,r} == B_{n,r}`` over ``1 <= n <= n_max, 0 <= r <= r_max``."""
    cases = 0
    for n in range(1, n_max + 1):
        for r in range(r_max + 1):
            cases += 1
            A, B = multiset_A(n, r), multiset_B(n, r)
            if A != B:
                return {
                    "pass": False,
                    "cases": cases,
                    "counterexample": {"n": n, "r": r, "A": sorted(A.elements()), "B": sorted(B.elements())},
                }
    return {"pass": True, "cases": cases, "counterexample": None}


def _sorted_complex(values) -> np.ndarray:
    arr = np.asarray([complex(v) for v in values])
    # round before sorting so the order is stable under float noise in the real part
    key = np.lexsort((np.round(arr.imag, 9), np.round(arr.real, 9)))
    return arr[key]


def match_multisets(left, right, tol: float) -> float:
    """Largest distance in a tolerance-bucketed matching of two complex multisets.

    After a lexicographic sort each left entry is paired greedily with the nearest
    unused right entry; returns ``inf`` if some entry has no partner within ``tol``.
    """
    L, R = _sorted_complex(left), _sorted_complex(right)
    if L.size != R.size:
        raise ValueError(f"size mismatch: {L.size} vs {R.size}")
    used = np.zeros(R.size, dtype=bool)
    worst = 0.0
    for z in L:
        dist = np.where(used, np.inf, np.abs(R - z))
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return float("inf")
        used[j] = True
        worst = max(worst, float(dist[j]))
    return worst


def verify_local_identity(n: int, r: int, s: SatakeParams, tol: float = 1e-9) -> Report:
    left = [g * d for g in local_params(n, s).params for d in local_params(n + r, s).params]
    right = [g for i in range(n + 1) for g in local_params(2 * i + r, s).params]
    dev = match_multisets(left, right, tol)
    return Report(n, r, "local", bool(dev <= tol), dev, len(left))


def rankin_selberg_series(n1: int, n2: int, f: Eigenform, X: int):
    """Dirichlet series of ``Sym^n1 x Sym^n2`` from pairwise products of local parameters."""
    theta = _angles(f, primes_up_to(X))
    g1, g2 = sym_power_gammas(n1, theta), sym_power_gammas(n2, theta)
    pairs = (g1[:, :, None] * g2[:, None, :]).reshape(theta.size, g1.shape[1] * g2.shape[1])
    return series_from_params(pairs, X, f"Sym^{n1} x Sym^{n2}")


def product_series(indices: Iterable[int], f: Eigenform, X: int) -> np.ndarray:
    out = None
    for i in indices:
        c = dirichlet_coeffs(i, f, X).coeffs
        out = c if out is None else dirichlet_convolve(out, c)
    return out


def verify_global_identity(n: int, r: int, f: Eigenform, X: int, tol: float = 1e-8) -> Report:
    left = rankin_selberg_series(n, n + r, f, X).coeffs
    right = product_series((2 * i + r for i in range(n + 1)), f, X)
    dev = float(np.abs(left[1:] - right[1:]).max()) if X >= 1 else 0.0
    return Report(n, r, "global", bool(dev < tol), dev, (n + 1) * (n + r + 1))


def verify_multiset_report(n: int, r: int) -> Report:
    A, B = multiset_A(n, r), multiset_B(n, r)
    return Report(n, r, "multiset", A == B, 0.0 if A == B else float("inf"), A.cardinality)
