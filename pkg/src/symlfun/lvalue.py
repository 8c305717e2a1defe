"""Values of L(s, Sym^n f) near s = 1, the Mellin kernel identity and the L(1) lower bound.

Two independent routes to L(1, Sym^n f) are provided: a smoothed Dirichlet sum and
a truncated Euler product. At s = 1 neither has a rigorous tail bound from the
coefficients alone, so both report a-posteriori error estimates; for Re s > 1 the
smoothed sum carries a rigorous divisor-function majorant.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss

from ._arith import primes_up_to
from .hecke_forms import Eigenform, SatakeParams
from .sym_power import DirichletSeries, _angles, dirichlet_coeffs, local_params, sym_power_gammas, sym_power_traces


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, x_needed: int | None = None):
        super().__init__(message)
        self.x_needed = x_needed


class QuadratureError(RuntimeError):
    pass


# -- Mellin kernel -----------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    r: int
    x: float

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if not self.x > 0:
            raise ValueError("x must be > 0")


def kernel_closed_form(spec: KernelSpec) -> float:
    """``(1/r!)(1 - 1/x)^r`` for ``x > 1`` and 0 otherwise."""
    if spec.x <= 1:
        return 0.0
    return (1 - 1 / spec.x) ** spec.r / math.factorial(spec.r)


def kernel_tail_bound(spec: KernelSpec, T: float, sigma: float = 2.0) -> float:
    """Bound on the part of the line integral with ``|t| > T``: ``x^sigma / (pi r T^r)``."""
    return spec.x**sigma / (math.pi * spec.r * T**spec.r)


def _kernel_panels(spec: KernelSpec, T: float, nodes: int, width: float, sigma: float) -> float:
    u, w = leggauss(nodes)
    P = max(1, math.ceil(T / width))
    edges = np.linspace(0.0, T, P + 1)
    a, b = edges[:-1, None], edges[1:, None]
    t = (a + b) / 2 + (b - a) / 2 * u
    wt = (b - a) / 2 * w
    s = sigma + 1j * t
    den = np.ones_like(s)
    for j in range(spec.r + 1):
        den = den * (s + j)
    vals = np.exp(s * math.log(spec.x)) / den
    # integrand at -t is the conjugate of that at t
    return float(np.sum(vals.real * wt) / math.pi)


def kernel_quadrature(spec: KernelSpec, T: float, nodes: int = 100, sigma: float = 2.0) -> tuple[float, float]:
    """``(1/2 pi i) int x^s / (s (s+1) ... (s+r)) ds`` over ``Re s = sigma, |t| <= T``.

    Composite Gauss-Legendre with ``nodes`` points per panel, panels spanning at
    most ten oscillations of ``x^(it)``. Returns ``(value, tail_bound)``; raises
    QuadratureError if halving the panel width moves the value by more than
    the tail bound.
    """
    if T <= 0:
        raise ValueError("T must be > 0")
    if nodes < 100:
        raise ValueError("nodes must be >= 100")
    lx = abs(math.log(spec.x))
    width = min(4.0, 20 * math.pi / lx) if lx > 0 else 4.0
    coarse = _kernel_panels(spec, T, nodes, width, sigma)
    fine = _kernel_panels(spec, T, nodes, width / 2, sigma)
    tail = kernel_tail_bound(spec, T, sigma)
    if abs(coarse - fine) > tail:
        raise QuadratureError(
            f"panel refinement moved the integral by {abs(coarse - fine):.3g} > tail bound {tail:.3g}"
        )
    return fine, tail


# -- smoothed sums -----------------------------------------------------------


def smoothed_sum(series: DirichletSeries, beta: float, x: float) -> float:
    """``sum_{m < x} lambda(m) m^(-beta) (1/2)(1 - m/x)^2``."""
    if not 0.5 < beta < 1:
        raise ValueError("beta must lie in (1/2, 1)")
    if x > series.truncation + 1:
        raise ValueError(f"x = {x} exceeds coefficient truncation {series.truncation}")
    top = math.ceil(x) - 1
    if top < 1:
        return 0.0
    m = np.arange(1, top + 1, dtype=float)
    return float(np.sum(series.coeffs[1 : top + 1] * m ** (-beta) * 0.5 * (1 - m / x) ** 2))


def residue_terms(l_value: float, n: int, beta: float, x: float, d_beta: float) -> dict:
    """Residues at s = 1 - beta (from D's pole) and s = 0 of the shifted contour integral."""
    R1 = l_value ** (1 / (n + 1)) * x ** (1 - beta) / ((1 - beta) * beta * (1 + beta))
    return {"R1": R1, "R2": d_beta / 2}


def cutoff(t: np.ndarray) -> np.ndarray:
    """1 on [0, 1/2], cubic smoothstep down to 0 on [1/2, 1]."""
    u = np.clip(2 * np.asarray(t, dtype=float) - 1, 0.0, 1.0)
    return 1 - u * u * (3 - 2 * u)


def smoothed_dirichlet(series: DirichletSeries, s: float, Y: float | None = None) -> float:
    """``sum_m lambda(m) m^(-s) w(m/Y)``; ``Y`` defaults to the truncation."""
    Y = series.truncation if Y is None else Y
    top = min(series.truncation, int(Y))
    m = np.arange(1, top + 1, dtype=float)
    return float(np.sum(series.coeffs[1 : top + 1] * m ** (-s) * cutoff(m / Y)))


def divisor_tail_bound(K: int, sigma: float, Y: float) -> float:
    """Rigorous bound for ``sum_{m > Y} d_K(m) m^(-sigma)``, ``sigma > 1``.

    Uses ``sum_{m <= t} d_K(m) <= t (log t + K - 1)^(K-1) / (K-1)!`` and partial
    summation, giving ``sigma/c! e^(ac) a^(-c-1) Gamma(c+1, a(log Y + c))`` with
    ``a = sigma - 1``, ``c = K - 1``.
    """
    if sigma <= 1:
        raise ValueError("the divisor majorant diverges for sigma <= 1")
    a, c = mpmath.mpf(sigma) - 1, K - 1
    val = (
        sigma
        / mpmath.factorial(c)
        * mpmath.exp(a * c)
        * a ** (-c - 1)
        * mpmath.gammainc(c + 1, a * (mpmath.log(Y) + c))
    )
    return float(val)


@dataclass
class LValue:
    value: float
    error_bound: float
    X: int
    s: float
    method: str
    error_kind: str  # "rigorous" or "a-posteriori"
    details: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.value, self.error_bound))

    def to_json(self) -> dict:
        return asdict(self)


def smoothed_l_value(series: DirichletSeries, s: float, degree: int) -> LValue:
    """Smoothed Dirichlet sum at real ``s`` with an error bound.

    ``degree`` is the Euler-product degree d; ``|lambda(m)| <= d_d(m)`` drives the
    rigorous bound when ``s > 1``. At ``s <= 1`` the bound is the spread of the
    sums with cutoffs X, X/2, X/4 (a-posteriori, not rigorous).
    """
    X = series.truncation
    value = smoothed_dirichlet(series, s, X)
    if s > 1:
        # w = 1 on [0, 1/2], so only m > X/2 differ from the full series
        err = divisor_tail_bound(degree, s, X / 2)
        details = {"majorant": f"sum_(m>X/2) d_{degree}(m) m^-s", "majorant_constant": 1 / math.factorial(degree - 1)}
        return LValue(value, err, X, s, "smoothed-sum", "rigorous", details)
    ladder = [value] + [smoothed_dirichlet(series, s, X / 2**j) for j in (1, 2)]
    err = max(abs(ladder[0] - ladder[1]), abs(ladder[1] - ladder[2]))
    return LValue(value, err, X, s, "smoothed-sum", "a-posteriori", {"ladder": ladder})


def l_value(n: int, f: Eigenform | None, X: int, s: float = 1.0, precision_target: float = 1e-3) -> LValue:
    """L(s, Sym^n f) by smoothed sum; ``n = 0`` gives zeta(s) through the same code."""
    series = dirichlet_coeffs(n, f, X)
    res = smoothed_l_value(series, s, n + 1)
    if res.error_bound >= precision_target:
        need = X * 4
        if res.error_kind == "rigorous":
            need = X
            while divisor_tail_bound(n + 1, s, need / 2) >= precision_target and need < 10**15:
                need *= 2
        raise ConvergenceError(
            f"error bound {res.error_bound:.3g} >= target {precision_target:.3g} at X={X}", need
        )
    return res


def l_value_at_1(n: int, f: Eigenform, X: int, precision_target: float = 1e-3) -> LValue:
    if n < 1:
        raise ValueError("n must be >= 1")
    return l_value(n, f, X, 1.0, precision_target)


def euler_product_value(n: int, f: Eigenform, P: int, s: float = 1.0) -> LValue:
    """``prod_{p <= P} prod_j (1 - gamma_j p^-s)^(-1)`` with a heuristic error estimate.

    The estimate is the larger of the spread over P, P/2, P/4 and a
    square-root-cancellation model of the prime tail, ``3 / sqrt(P log P)``
    in the logarithm.
    """

    def partial(top: int) -> float:
        primes = primes_up_to(top)
        g = sym_power_gammas(n, _angles(f, primes))
        return math.exp(float(-np.log(1 - g / primes[:, None].astype(float) ** s).real.sum()))

    ladder = [partial(P), partial(P // 2), partial(P // 4)]
    value = ladder[0]
    sigma_tail = 3 / math.sqrt(P * math.log(P)) if s <= 1 else 0.0
    err = max(abs(ladder[0] - ladder[1]), abs(ladder[1] - ladder[2]), abs(value) * math.expm1(sigma_tail))
    return LValue(value, err, P, s, "euler-product", "a-posteriori", {"ladder": ladder})


# -- lower bound -------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundSpec:
    n: int
    k: int
    eps: float
    C: float = 1.0


def lower_bound(spec: LowerBoundSpec) -> float:
    """``C / (log k)^(2n + 2 + eps)``."""
    if spec.eps <= 0 or spec.C <= 0:
        raise ValueError("eps and C must be positive")
    return spec.C / math.log(spec.k) ** (2 * spec.n + 2 + spec.eps)


def check_bound(n: int, f: Eigenform, eps: float, C: float, X: int, precision_target: float = 1e-3) -> dict:
    res = l_value_at_1(n, f, X, precision_target)
    bound = lower_bound(LowerBoundSpec(n, f.weight, eps, C))
    lower = res.value - res.error_bound
    return {
        "n": n,
        "k": f.weight,
        "value": res.value,
        "error_bound": res.error_bound,
        "bound": bound,
        "ratio": res.value / bound,
        "pass": bool(lower > bound),
    }


# -- log D(s) ----------------------------------------------------------------


def log_coeff(n: int, s: SatakeParams, m: int, tol: float = 1e-9) -> float:
    """``(n+1) + sum_j alpha^(mj) beta^(m(n-j))``, the p^(-ms) coefficient of (n+1) log D(s)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    z = (n + 1) + sum(g**m for g in local_params(n, s).params)
    if abs(z.imag) > tol:
        raise ValueError(f"imaginary residue {abs(z.imag):.3g} in log coefficient")
    return float(z.real)


def log_d_reconstruction(n: int, f: Eigenform, P: int, s: float = 2.0, m_max: int = 40) -> tuple[float, float]:
    """``D(s) = zeta(s) L(s, Sym^n f)^(1/(n+1))`` over primes ``p <= P``, two ways.

    First value: exp of the log-coefficient series ``sum_p sum_m c_m(p) / ((n+1) m p^(ms))``.
    Second value: the Euler factors multiplied out directly.
    """
    primes = primes_up_to(P)
    theta = _angles(f, primes)
    pf = primes.astype(float)
    logp = np.log(pf)
    total = 0.0
    for m in range(1, m_max + 1):
        coeff = (n + 1) + sym_power_traces(n, theta, m)
        total += float(np.sum(coeff * np.exp(-m * s * logp))) / (m * (n + 1))
    via_series = math.exp(total)
    g = sym_power_gammas(n, theta)
    log_L = float(-np.log(1 - g / pf[:, None] ** s).real.sum())
    log_zeta = float(-np.log1p(-(pf ** (-s))).sum())
    via_product = math.exp(log_zeta + log_L / (n + 1))
    return via_series, via_product


# -- zero scan ---------------------------------------------------------------


def zero_scan(n: int, f: Eigenform, interval: tuple[float, float], steps: int, X: int) -> dict:
    """HEURISTIC scan of a truncated smoothed approximation to L(sigma, Sym^n f).

    Grid points are the midpoints of ``steps`` equal cells of ``(a, b)``.
    """
    a, b = interval
    base = {"heuristic": True, "n": n, "k": f.weight, "X": X, "interval": [a, b]}
    if not a < b:
        return {**base, "rows": [], "min_value": None, "sign_change": False, "max_tail_estimate": None}
    series = dirichlet_coeffs(n, f, X)
    rows = []
    for j in range(steps):
        sigma = a + (b - a) * (j + 0.5) / steps
        res = smoothed_l_value(series, sigma, n + 1)
        rows.append({"sigma": sigma, "value": res.value, "tail_estimate": res.error_bound})
    vals = np.array([r["value"] for r in rows])
    sign_change = bool(np.any(np.sign(vals[1:]) != np.sign(vals[:-1])) or np.any(vals == 0))
    return {
        **base,
        "rows": rows,
        "min_value": float(vals.min()),
        "sign_change": sign_change,
        "max_tail_estimate": max(r["tail_estimate"] for r in rows),
    }
