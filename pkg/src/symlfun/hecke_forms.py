"""Level-1 modular forms: exact q-expansions, Hecke eigenforms and Satake parameters.

All q-expansion arithmetic is exact (Python integers, multiplied by Kronecker
substitution through gmpy2). Floating point enters only when coefficients are
normalised by ``m**((k-1)/2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, TextIO

import gmpy2
import mpmath
import numpy as np

from ._arith import is_prime, primes_up_to

DEFAULT_TOL = 1e-9
DIM_ONE_WEIGHTS = (12, 16, 18, 20, 22, 26)


class EigenformError(ValueError):
    pass


# -- exact power series ------------------------------------------------------


def _pack(coeffs: Sequence[int], width: int) -> int:
    nbytes = width // 8
    return int.from_bytes(b"".join(int(c).to_bytes(nbytes, "little") for c in coeffs), "little")


def _unpack(value: int, width: int, count: int) -> list[int]:
    nbytes = width // 8
    raw = int(value).to_bytes(max((value.bit_length() + 7) // 8, nbytes * count), "little")
    return [int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") for i in range(count)]


def _mul_nonneg(a: list[int], b: list[int], count: int) -> list[int]:
    if not a or not b:
        return [0] * count
    top_a, top_b = max(a), max(b)
    if top_a == 0 or top_b == 0:
        return [0] * count
    bound = top_a * top_b * min(len(a), len(b))
    width = (bound.bit_length() + 8) // 8 * 8
    prod = gmpy2.mpz(_pack(a, width)) * gmpy2.mpz(_pack(b, width))
    return _unpack(int(prod), width, count)


def series_mul(a: Sequence[int], b: Sequence[int], count: int) -> list[int]:
    """First ``count`` coefficients of the product of two integer power series.

    Signed inputs are split into nonnegative parts so the packed product can be
    decoded bytewise without borrows.
    """
    a = list(a[:count])
    b = list(b[:count])
    ap = [c if c > 0 else 0 for c in a]
    an = [-c if c < 0 else 0 for c in a]
    bp = [c if c > 0 else 0 for c in b]
    bn = [-c if c < 0 else 0 for c in b]
    pp = _mul_nonneg(ap, bp, count)
    nn = _mul_nonneg(an, bn, count)
    pn = _mul_nonneg(ap, bn, count)
    np_ = _mul_nonneg(an, bp, count)
    return [w + x - y - z for w, x, y, z in zip(pp, nn, pn, np_)]


@dataclass(frozen=True)
class QExpansion:
    """Truncated q-series with exact integer coefficients, known through ``q**precision``."""

    weight: int
    coeffs: tuple[int, ...]
    precision: int

    def __post_init__(self):
        if len(self.coeffs) != self.precision + 1:
            raise ValueError(
                f"expected {self.precision + 1} coefficients, got {len(self.coeffs)}"
            )

    def __getitem__(self, m: int) -> int:
        return self.coeffs[m]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, precision: int) -> "QExpansion":
        return QExpansion(self.weight, self.coeffs[: precision + 1], precision)

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise ValueError("cannot add forms of different weight")
        prec = min(self.precision, other.precision)
        return QExpansion(
            self.weight, tuple(a + b for a, b in zip(self.coeffs[: prec + 1], other.coeffs)), prec
        )

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self + other.scale(-1)

    def scale(self, c: int) -> "QExpansion":
        return QExpansion(self.weight, tuple(c * a for a in self.coeffs), self.precision)

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        prec = min(self.precision, other.precision)
        coeffs = series_mul(self.coeffs, other.coeffs, prec + 1)
        return QExpansion(self.weight + other.weight, tuple(coeffs), prec)

    def __pow__(self, e: int) -> "QExpansion":
        if e < 0:
            raise ValueError("negative power")
        result = QExpansion(0, (1,) + (0,) * self.precision, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


def _sigma_table(power: int, X: int) -> list[int]:
    sig = [0] * (X + 1)
    for d in range(1, X + 1):
        dp = d**power
        for m in range(d, X + 1, d):
            sig[m] += dp
    return sig


@lru_cache(maxsize=32)
def eisenstein(weight: int, precision: int) -> QExpansion:
    """Normalised Eisenstein series ``E_4`` or ``E_6`` with constant term 1."""
    if weight not in (4, 6):
        raise ValueError(f"eisenstein: weight must be 4 or 6, got {weight}")
    if precision < 0:
        raise ValueError("precision must be >= 0")
    power, scale = (3, 240) if weight == 4 else (5, -504)
    sig = _sigma_table(power, precision)
    coeffs = [1] + [scale * s for s in sig[1:]]
    return QExpansion(weight, tuple(coeffs), precision)


def _euler_cube(precision: int) -> list[int]:
    # prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^(k(k+1)/2)  (Jacobi)
    out = [0] * (precision + 1)
    k = 0
    while k * (k + 1) // 2 <= precision:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


@lru_cache(maxsize=32)
def delta(precision: int) -> QExpansion:
    """``Delta = q prod (1 - q^n)^24`` through ``q**precision``, exact."""
    if precision < 1:
        raise ValueError("delta needs precision >= 1")
    count = precision  # coefficients of prod(1-q^n)^24 needed: q^0 .. q^(X-1)
    cube = _euler_cube(count - 1)
    sq = series_mul(cube, cube, count)  # ^6
    p12 = series_mul(sq, sq, count)
    p24 = series_mul(p12, p12, count)
    return QExpansion(12, tuple([0] + p24), precision)


def dim_modular(k: int) -> int:
    if k < 0 or k % 2:
        return 0
    if k == 2:
        return 0
    return k // 12 + (0 if k % 12 == 2 else 1)


def dim_cusp(k: int) -> int:
    if k < 4 or k % 2:
        return 0
    return dim_modular(k) - 1


def _eisenstein_product(weight: int, precision: int) -> QExpansion:
    """A fixed monomial E4^a E6^b of weight in {0, 4, 6, 8, 10, 14}."""
    one = QExpansion(0, (1,) + (0,) * precision, precision)
    e4, e6 = eisenstein(4, precision), eisenstein(6, precision)
    table = {0: one, 4: e4, 6: e6, 8: e4 * e4, 10: e4 * e6, 14: e4 * e4 * e6}
    return table[weight]


@lru_cache(maxsize=32)
def miller_basis(k: int, precision: int) -> tuple[QExpansion, ...]:
    """Echelon integral basis ``f_i = q^(i+1) + O(q^(d+1))`` of ``S_k``."""
    if k % 2:
        raise ValueError(f"miller_basis: weight must be even, got {k}")
    d = dim_cusp(k)
    if d == 0:
        return ()
    rest = k - 12 * d
    if rest < 0 or rest not in (0, 4, 6, 8, 10, 14):
        raise AssertionError(f"unexpected residual weight {rest} for k={k}")
    prec = max(precision, d)
    D = delta(prec)
    e6sq = eisenstein(6, prec) ** 2
    base = _eisenstein_product(rest, prec)
    gens = []
    for j in range(1, d + 1):
        g = (D**j) * (e6sq ** (d - j)) * base
        gens.append(QExpansion(k, g.coeffs, prec))
    # gens[j-1] = q^j + O(q^(j+1)); clear entries above the diagonal from the bottom up
    for i in range(d - 1, -1, -1):
        for j in range(i + 1, d):
            c = gens[i][j + 1]
            if c:
                gens[i] = gens[i] - gens[j].scale(c)
    return tuple(g.truncate(precision) for g in gens)


# -- eigenforms --------------------------------------------------------------


@dataclass(frozen=True)
class Eigenform:
    """Normalised Hecke eigenform: ``lam[m]`` is the normalised eigenvalue (index 0 unused)."""

    weight: int
    lam: np.ndarray
    exact: tuple[int, ...] | None = None
    label: str = field(default="")

    @property
    def precision(self) -> int:
        return len(self.lam) - 1

    def a(self, m: int) -> int:
        if self.exact is None:
            raise EigenformError("no exact integer coefficients on this eigenform")
        return self.exact[m]

    def lam_mp(self, m: int):
        """High-precision ``lambda_f(m)`` at the current mpmath precision."""
        if self.exact is not None:
            return mpmath.mpf(self.exact[m]) / mpmath.power(m, mpmath.mpf(self.weight - 1) / 2)
        return mpmath.mpf(float(self.lam[m]))


def normalize(coeffs: Sequence[int], k: int) -> np.ndarray:
    lam = np.zeros(len(coeffs))
    half = (k - 1) / 2
    for m in range(1, len(coeffs)):
        c = coeffs[m]
        # exact ints may exceed float range only far beyond desk scale
        lam[m] = math.exp(math.log(abs(c)) - half * math.log(m)) * (1 if c > 0 else -1) if c else 0.0
    return lam


@lru_cache(maxsize=16)
def hecke_eigenform(k: int, precision: int) -> Eigenform:
    """The unique normalised eigenform in ``S_k`` for the six weights with ``dim S_k = 1``."""
    if k not in DIM_ONE_WEIGHTS:
        raise EigenformError(
            f"dim S_{k} != 1; use eigenform_numeric(k, index, precision) for this weight"
        )
    if precision < 1:
        raise ValueError("precision must be >= 1")
    f = delta(precision)
    if k > 12:
        f = f * _eisenstein_product(k - 12, precision)
    return Eigenform(k, normalize(f.coeffs, k), tuple(f.coeffs), label=f"k={k}")


def _hecke_t2_matrix(basis: Sequence[QExpansion], k: int):
    d = len(basis)
    rows = []
    for f in basis:
        # (T_2 f)(m) = a(2m) + 2^(k-1) a(m/2)
        row = []
        for m in range(1, d + 1):
            val = f[2 * m] + (2 ** (k - 1) * f[m // 2] if m % 2 == 0 else 0)
            row.append(val)
        rows.append(row)
    return rows


def eigenform_numeric(
    k: int, index: int, precision: int, tol: float = DEFAULT_TOL, dps: int = 60
) -> Eigenform:
    """Eigenform number ``index`` of ``S_k`` (ascending ``a_f(2)``) by diagonalising ``T_2``.

    The Hecke matrix is diagonalised in mpmath at ``dps`` digits on the Miller basis,
    so coefficient recombination does not lose precision to cancellation.
    """
    d = dim_cusp(k)
    if d == 0:
        raise EigenformError(f"S_{k} is zero-dimensional")
    if not 0 <= index < d:
        raise EigenformError(f"eigen_index must lie in [0, {d}), got {index}")
    basis = miller_basis(k, max(precision, 2 * d))
    rows = _hecke_t2_matrix(basis, k)
    with mpmath.workdps(dps):
        M = mpmath.matrix(rows)
        # coordinates c with T_2(sum c_i f_i) = lambda sum c_i f_i solve M^T c = lambda c
        evals, evecs = mpmath.eig(M.T)
        pairs = []
        for j in range(d):
            ev = evals[j]
            if abs(mpmath.im(ev)) > mpmath.mpf(10) ** (-dps // 2):
                raise EigenformError("T_2 has a non-real eigenvalue; basis is wrong")
            vec = [mpmath.re(evecs[i, j]) for i in range(d)]
            lead = vec[0]
            if abs(lead) < mpmath.mpf(10) ** (-dps // 2):
                raise EigenformError("eigenvector with vanishing q-coefficient")
            pairs.append((mpmath.re(ev), [c / lead for c in vec]))
        pairs.sort(key=lambda t: t[0])
        norm2 = [float(ev / mpmath.power(2, mpmath.mpf(k - 1) / 2)) for ev, _ in pairs]
        gaps = np.diff(norm2)
        if gaps.size and gaps.min() < tol:
            raise EigenformError(f"T_2 eigenvalues closer than tol={tol}: {norm2}")
        _, coords = pairs[index]
        lam = np.zeros(precision + 1)
        half = mpmath.mpf(k - 1) / 2
        for m in range(1, precision + 1):
            a_m = mpmath.fsum(c * basis[i][m] for i, c in enumerate(coords))
            lam[m] = float(a_m / mpmath.power(m, half))
    return Eigenform(k, lam, None, label=f"k={k},i={index}")


# -- Satake parameters -------------------------------------------------------


@dataclass(frozen=True)
class SatakeParams:
    alpha: complex
    beta: complex
    prime: int


def satake(lambda_p: float, p: int, tol: float = DEFAULT_TOL) -> SatakeParams:
    """Roots of ``x^2 - lambda_p x + 1``; ``alpha`` in the closed upper half plane.

    Accepts floats or mpmath numbers; the output type follows the input.
    """
    if abs(lambda_p) > 2 + tol:
        raise ValueError(f"|lambda({p})| = {abs(lambda_p)} exceeds the Deligne bound 2")
    if isinstance(lambda_p, (mpmath.mpf, mpmath.mpc)):
        lam = mpmath.mpf(lambda_p)
        if abs(lam) >= 2:
            r = mpmath.sign(lam)
            return SatakeParams(mpmath.mpc(r), mpmath.mpc(r), p)
        im = mpmath.sqrt(4 - lam * lam) / 2
        return SatakeParams(mpmath.mpc(lam / 2, im), mpmath.mpc(lam / 2, -im), p)
    lam = float(lambda_p)
    if abs(lam) >= 2:
        r = math.copysign(1.0, lam)
        return SatakeParams(complex(r), complex(r), p)
    im = math.sqrt(4 - lam * lam) / 2
    return SatakeParams(complex(lam / 2, im), complex(lam / 2, -im), p)


def satake_angles(f: Eigenform, primes: Iterable[int]) -> np.ndarray:
    """Angles ``theta_p`` in ``[0, pi]`` with ``alpha_p = exp(i theta_p)``."""
    primes = np.asarray(list(primes) if not isinstance(primes, np.ndarray) else primes)
    if primes.size and primes.max() > f.precision:
        raise EigenformError(
            f"eigenvalues known to {f.precision}, need primes up to {int(primes.max())}"
        )
    lam = f.lam[primes]
    if np.any(np.abs(lam) > 2 + DEFAULT_TOL):
        bad = primes[np.abs(lam) > 2 + DEFAULT_TOL][0]
        raise ValueError(f"Deligne bound violated at p={bad}")
    return np.arccos(np.clip(lam / 2, -1.0, 1.0))


# -- consistency checks ------------------------------------------------------


def check_deligne_exact(f: Eigenform, limit: int) -> tuple[bool, int | None]:
    """``a(p)^2 <= 4 p^(k-1)`` in integers for every prime ``p <= limit``."""
    for p in primes_up_to(limit):
        p = int(p)
        if f.a(p) ** 2 > 4 * p ** (f.weight - 1):
            return False, p
    return True, None


def hecke_relation_defect_exact(f: Eigenform, m: int, n: int) -> int:
    """``a(m)a(n) - sum_{d | (m,n)} d^(k-1) a(mn/d^2)``, zero for a true eigenform."""
    g = math.gcd(m, n)
    rhs = sum(d ** (f.weight - 1) * f.a(m * n // (d * d)) for d in range(1, g + 1) if g % d == 0)
    return f.a(m) * f.a(n) - rhs


def hecke_relation_defect(f: Eigenform, m: int, n: int) -> float:
    g = math.gcd(m, n)
    rhs = sum(f.lam[m * n // (d * d)] for d in range(1, g + 1) if g % d == 0)
    return float(f.lam[m] * f.lam[n] - rhs)


# -- text import / export ----------------------------------------------------


def export_eigenvalues(f: Eigenform, fh: TextIO, exact: bool = False) -> None:
    """Write ``m<TAB>lambda`` lines, or ``m<TAB>a_f(m)`` integers when ``exact``."""
    if exact:
        if f.exact is None:
            raise EigenformError("exact export requested for a numeric eigenform")
        fh.write(f"# weight={f.weight} normalized=false\n")
        for m in range(1, f.precision + 1):
            fh.write(f"{m}\t{f.exact[m]}\n")
        return
    fh.write(f"# weight={f.weight} normalized=true\n")
    for m in range(1, f.precision + 1):
        fh.write(f"{m}\t{f.lam[m]:.15g}\n")


def import_eigenvalues(fh: TextIO) -> Eigenform:
    header = fh.readline().strip()
    if not header.startswith("#"):
        raise ValueError("missing '# weight=K normalized=...' header")
    fields = dict(tok.split("=", 1) for tok in header[1:].split())
    k = int(fields["weight"])
    normalized = fields.get("normalized", "true").lower() == "true"
    rows = [line.split("\t") for line in fh if line.strip() and not line.startswith("#")]
    ms = [int(r[0]) for r in rows]
    if ms != list(range(1, len(ms) + 1)):
        raise ValueError("eigenvalue file must list m = 1, 2, ..., X in order")
    if normalized:
        lam = np.zeros(len(ms) + 1)
        lam[1:] = [float(r[1]) for r in rows]
        return Eigenform(k, lam, None, label=f"k={k}")
    exact = (0,) + tuple(int(r[1]) for r in rows)
    return Eigenform(k, normalize(exact, k), exact, label=f"k={k}")


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def satake_at(f: Eigenform, p: int, tol: float = DEFAULT_TOL) -> SatakeParams:
    _require_prime(p)
    if p > f.precision:
        raise EigenformError(f"eigenvalues known to {f.precision}, need p={p}")
    return satake(float(f.lam[p]), p, tol)


def unit_circle_defect(s: SatakeParams) -> float:
    return max(
        abs(s.alpha * s.beta - 1),
        abs(abs(s.alpha) - 1),
        abs(abs(s.beta) - 1),
    )


__all__ = [
    "QExpansion",
    "Eigenform",
    "SatakeParams",
    "EigenformError",
    "eisenstein",
    "delta",
    "miller_basis",
    "hecke_eigenform",
    "eigenform_numeric",
    "satake",
    "satake_at",
    "satake_angles",
    "dim_cusp",
    "dim_modular",
    "check_deligne_exact",
    "hecke_relation_defect_exact",
    "hecke_relation_defect",
    "export_eigenvalues",
    "import_eigenvalues",
    "series_mul",
]
