"""Gamma factors, analytic conductors and zero-free interval endpoints for Sym^n f."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .auxiliary import factor_multiset

# level 1: every Sym^n f is unramified
ARITHMETIC_CONDUCTOR = 1


@dataclass(frozen=True)
class GammaFactor:
    kind: str  # "real" (Gamma_R) or "complex" (Gamma_C)
    shift: float

    @property
    def degree(self) -> int:
        return 1 if self.kind == "real" else 2

    def __str__(self) -> str:
        name = "Gamma_R" if self.kind == "real" else "Gamma_C"
        return f"{name}(s+{self.shift:g})"


@dataclass(frozen=True)
class ZeroFreeInterval:
    left_endpoint: float
    c: float
    n: int
    k: int
    form: str = "explicit_n"  # "explicit_n": c/(n^4 log nk); "log_k": c_n/log k


def gamma_factors(n: int, k: int) -> list[GammaFactor]:
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 2:
        m = (n - 1) // 2
        return [GammaFactor("complex", (j + 0.5) * (k - 1)) for j in range(m + 1)]
    m = n // 2
    head = GammaFactor("real", float(m % 2))
    return [head] + [GammaFactor("complex", float(j * (k - 1))) for j in range(1, m + 1)]


def gamma_degree(factors: list[GammaFactor]) -> int:
    return sum(g.degree for g in factors)


def analytic_conductor(n: int, k: int, s: float = 0.0) -> float:
    """Product of ``(|s + mu| + 1)`` over the Gamma_R shifts of L_infty(s, Sym^n f).

    Gamma_C(s + mu) counts as Gamma_R(s + mu) Gamma_R(s + mu + 1); at ``s = 0`` this
    reproduces ``(1 + delta) prod (j(k-1)+1)(j(k-1)+2)`` for even n.
    """
    q = float(ARITHMETIC_CONDUCTOR)
    for g in gamma_factors(n, k):
        shifts = (g.shift,) if g.kind == "real" else (g.shift, g.shift + 1)
        for mu in shifts:
            q *= abs(s + mu) + 1
    return q


def log_analytic_conductor(n: int, k: int, s: float = 0.0) -> float:
    total = math.log(ARITHMETIC_CONDUCTOR)
    for g in gamma_factors(n, k):
        shifts = (g.shift,) if g.kind == "real" else (g.shift, g.shift + 1)
        total += sum(math.log(abs(s + mu) + 1) for mu in shifts)
    return total


def log_conductor_bound(n: int, k: int) -> tuple[float, float]:
    """``(log Q_{Sym^n f}, n log(nk/2))``; only their ratio is expected to stay bounded."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return log_analytic_conductor(n, k), n * math.log(n * k / 2)


def conductor_ratio_sweep(n_max: int = 30, k_max: int = 400) -> dict:
    """Largest ``log Q / (n log(nk/2))`` over ``1 <= n <= n_max``, even ``12 <= k <= k_max``."""
    worst = (0.0, None)
    for n in range(1, n_max + 1):
        for k in range(12, k_max + 1, 2):
            exact, bound = log_conductor_bound(n, k)
            ratio = exact / bound
            if ratio > worst[0]:
                worst = (ratio, (n, k))
    return {"constant": worst[0], "argmax": worst[1]}


def log_conductor_aux(n: int, k: int) -> tuple[float, float]:
    """Log-conductor of D(s), summed over its symmetric-power factors, beside ``n^2 log(nk)``.

    Adding factor log-conductors is a convention for the conductor of a product.
    """
    fm = factor_multiset(n)
    total = sum(mult * log_analytic_conductor(i, k) for i, mult in fm.factors)
    return total, n * n * math.log(n * k)


def conductor_majorant_ratio(m: int, k: int) -> float:
    """``Q_{Sym^(2m) f} / ((k-1)^(2m) (m!)^2)``."""
    logq = log_analytic_conductor(2 * m, k)
    return math.exp(logq - 2 * m * math.log(k - 1) - 2 * math.lgamma(m + 1))


def conductor_majorant_limit(m: int, k: int) -> float:
    """Provable ceiling ``(1 + delta) exp(3 H_m / (k-1))`` for conductor_majorant_ratio."""
    harmonic = sum(1.0 / j for j in range(1, m + 1))
    return (2.0 if m % 2 else 1.0) * math.exp(3 * harmonic / (k - 1))


def zero_free_endpoint(n: int, k: int, c: float = 1.0) -> ZeroFreeInterval:
    """Left end of ``(1 - c/(n^4 log(nk)), 1)``."""
    if c <= 0 or n < 1 or k < 12:
        raise ValueError("need c > 0, n >= 1, k >= 12")
    return ZeroFreeInterval(1 - c / (n**4 * math.log(n * k)), c, n, k, "explicit_n")


def log_k_endpoint(n: int, k: int, c_n: float = 1.0) -> ZeroFreeInterval:
    """Left end of ``(1 - c_n/log k, 1)`` with the n-dependence left inside ``c_n``."""
    if c_n <= 0 or n < 1 or k < 12:
        raise ValueError("need c_n > 0, n >= 1, k >= 12")
    return ZeroFreeInterval(1 - c_n / math.log(k), c_n, n, k, "log_k")


def sweep_row(n: int, k: int, c: float = 1.0) -> dict:
    Q = analytic_conductor(n, k)
    exact, bound = log_conductor_bound(n, k)
    return {
        "n": n,
        "k": k,
        "Q": Q,
        "log_Q": exact,
        "bound": bound,
        "endpoint": zero_free_endpoint(n, k, c).left_endpoint,
    }
