"""Local parameters, local Euler factors and Dirichlet coefficients of L(s, Sym^n f)."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence, TextIO

import mpmath
import numpy as np

from ._arith import assemble_multiplicative, max_depth, primes_up_to
from .hecke_forms import Eigenform, EigenformError, SatakeParams, satake, satake_angles

IMAG_TOL = 1e-9


class PrecisionError(ValueError):
    """Raised when a series is requested beyond the available eigenvalues or precision."""


@dataclass(frozen=True)
class LocalParams:
    n: int
    prime: int
    params: tuple

    def __len__(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class DirichletSeries:
    """Coefficients ``coeffs[m]`` for ``1 <= m <= truncation``; ``coeffs[0]`` is unused."""

    coeffs: np.ndarray
    truncation: int
    label: str = ""

    def __getitem__(self, m: int):
        return self.coeffs[m]

    def values(self) -> np.ndarray:
        return self.coeffs[1:]


def local_params(n: int, s: SatakeParams) -> LocalParams:
    """The multiset ``{alpha^j beta^(n-j) : 0 <= j <= n}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    params = tuple(s.alpha**j * s.beta ** (n - j) for j in range(n + 1))
    return LocalParams(n, s.prime, params)


def local_factor_coeffs(params, depth: int, tol: float = IMAG_TOL) -> list:
    """Coefficients ``c_0..c_depth`` of ``prod_j (1 - gamma_j x)^(-1)``.

    ``params`` is a LocalParams or any iterable of complex numbers closed under
    conjugation; the imaginary residue is checked against ``tol`` and dropped.
    """
    gammas = params.params if isinstance(params, LocalParams) else tuple(params)
    if depth < 0:
        raise ValueError("depth must be >= 0")
    use_mp = any(isinstance(g, (mpmath.mpc, mpmath.mpf)) for g in gammas)
    zero, one = (mpmath.mpc(0), mpmath.mpc(1)) if use_mp else (0j, 1 + 0j)
    c = [one] + [zero] * depth
    for g in gammas:
        # multiplying by 1/(1 - g x) is the running recurrence c_j += g c_(j-1)
        for j in range(1, depth + 1):
            c[j] = c[j] + g * c[j - 1]
    resid = max(abs(z.imag) / max(1, abs(z)) for z in c)
    if resid > tol:
        raise ValueError(f"imaginary residue {float(resid):.3g} exceeds tol; multiset not conjugate-closed")
    return [z.real for z in c]


def sym_power_traces(n: int, theta: np.ndarray, m: int = 1) -> np.ndarray:
    """``sum_j exp(i (n-2j) m theta)`` elementwise: the trace of Sym^n at the m-th power."""
    j = np.arange(n + 1)
    return np.cos(np.multiply.outer(m * theta, n - 2 * j)).sum(axis=-1)


def _geometric_product(gammas: np.ndarray, depth: int) -> np.ndarray:
    """Vectorised ``prod_j (1 - gamma_j x)^(-1)`` for rows of ``gammas`` (shape P x d)."""
    P = gammas.shape[0]
    c = np.zeros((P, depth + 1), dtype=complex)
    c[:, 0] = 1
    for col in range(gammas.shape[1]):
        g = gammas[:, col]
        for j in range(1, depth + 1):
            c[:, j] += g * c[:, j - 1]
    return c


def _real_part(c: np.ndarray, tol: float) -> np.ndarray:
    # residue measured relative to the coefficient size; large high-degree entries carry ulp noise
    resid = (np.abs(c.imag) / np.maximum(1.0, np.abs(c))).max(initial=0.0)
    if resid > tol:
        raise ValueError(f"imaginary residue {resid:.3g} exceeds tol")
    return c.real.copy()


def sym_power_gammas(n: int, theta: np.ndarray) -> np.ndarray:
    """Local parameters ``exp(i (n - 2j) theta)``, one row per prime."""
    j = np.arange(n + 1)
    return np.exp(1j * np.multiply.outer(theta, n - 2 * j))


def local_table(n: int, f: Eigenform, X: int, tol: float = IMAG_TOL) -> np.ndarray:
    """Local Euler coefficients of Sym^n f at every prime ``p <= X``; row i is prime i."""
    primes = primes_up_to(X)
    depth = max_depth(2, X) if X >= 2 else 0
    theta = _angles(f, primes)
    return _real_part(_geometric_product(sym_power_gammas(n, theta), depth), tol)


def _angles(f: Eigenform, primes: np.ndarray) -> np.ndarray:
    try:
        return satake_angles(f, primes)
    except EigenformError as exc:
        raise PrecisionError(str(exc)) from exc


def dirichlet_coeffs(n: int, f: Eigenform, X: int, tol: float = IMAG_TOL) -> DirichletSeries:
    """``lambda_{Sym^n f}(m)`` for ``m <= X``, exact at every retained index."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if X < 1:
        raise ValueError("X must be >= 1")
    if n == 0:
        coeffs = np.ones(X + 1)
        coeffs[0] = 0
        return DirichletSeries(coeffs, X, "zeta")
    local = local_table(n, f, X, tol)
    return DirichletSeries(assemble_multiplicative(local, X), X, f"Sym^{n} f ({f.label})")


def series_from_params(gamma_rows: np.ndarray, X: int, label: str, tol: float = IMAG_TOL):
    """Dirichlet series of the Euler product with local parameters ``gamma_rows[i]`` at prime i."""
    depth = max_depth(2, X) if X >= 2 else 0
    local = _real_part(_geometric_product(gamma_rows, depth), tol)
    return DirichletSeries(assemble_multiplicative(local, X), X, label)


def coefficient_mp(n: int, f: Eigenform, m: int, bits: int = 200):
    """``lambda_{Sym^n f}(m)`` recomputed in mpmath at ``bits`` of mantissa."""
    with mpmath.workprec(bits):
        return _coefficient_mp_factors(m, lambda p, v: local_factor_coeffs(
            local_params(n, satake(f.lam_mp(p), p)), v)[v])


def _coefficient_mp_factors(m: int, local):
    out = mpmath.mpf(1)
    rest = m
    p = 2
    while rest > 1:
        if p * p > rest:
            p = rest
        v = 0
        while rest % p == 0:
            rest //= p
            v += 1
        if v:
            out *= local(p, v)
        p += 1
    return out


def write_csv(series: DirichletSeries, fh: TextIO, comment: str | None = None) -> None:
    """CSV with columns ``m, lambda``; a leading comment row carries label and truncation."""
    if comment:
        fh.write(f"# {comment}\n")
    fh.write(f"# label={series.label} truncation={series.truncation}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["m", "lambda"])
    for m in range(1, series.truncation + 1):
        w.writerow([m, repr(float(series.coeffs[m]))])


def read_csv(fh: TextIO) -> DirichletSeries:
    label, X = "", None
    rows: list[Sequence[str]] = []
    for line in fh:
        if line.startswith("# label="):
            head = line[2:].strip()
            label = head[len("label=") : head.rindex(" truncation=")]
            X = int(head.rsplit("truncation=", 1)[1])
        elif line.startswith("#") or line.startswith("m,"):
            continue
        elif line.strip():
            rows.append(line.strip().split(","))
    coeffs = np.zeros(len(rows) + 1)
    for m, val in rows:
        coeffs[int(m)] = float(val)
    return DirichletSeries(coeffs, X if X is not None else len(rows), label)
