"""Elementary multiplicative-function machinery shared by the L-function modules."""

from __future__ import annotations

from functools import lru_cache
from math import comb

import numpy as np


@lru_cache(maxsize=8)
def smallest_prime_factor(limit: int) -> np.ndarray:
    """Return ``spf`` with ``spf[m]`` the least prime dividing ``m`` (``spf[0] = spf[1] = 0``)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.arange(limit + 1, dtype=np.int64)
    unset = spf == 0
    spf[unset] = rest[unset]
    spf[:2] = 0
    spf.flags.writeable = False
    return spf


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    spf = smallest_prime_factor(limit)
    idx = np.arange(limit + 1)
    return idx[(spf == idx) & (idx >= 2)]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def max_depth(p: int, X: int) -> int:
    """Largest ``v`` with ``p**v <= X``, computed in integers."""
    v, q = 0, p
    while q <= X:
        v += 1
        q *= p
    return v


class FactorTable:
    """Per-index prime-power decomposition used to assemble multiplicative sequences.

    For every ``2 <= m <= X`` records the least prime ``p | m``, its exponent ``v``
    and the cofactor ``m / p**v``; indices are grouped by number of distinct prime
    factors so assembly can run as a few vectorised rounds.
    """

    def __init__(self, X: int):
        self.X = X
        spf = smallest_prime_factor(X)
        m = np.arange(X + 1, dtype=np.int64)
        p = spf.copy()
        v = np.zeros(X + 1, dtype=np.int64)
        rest = m.copy()
        active = np.arange(2, X + 1)
        while active.size:
            div = rest[active] % p[active] == 0
            active = active[div]
            rest[active] //= p[active]
            v[active] += 1
        self.primes = primes_up_to(X)
        pindex = np.full(X + 1, -1, dtype=np.int64)
        pindex[self.primes] = np.arange(self.primes.size)
        self.prime_index = pindex[p]
        self.exponent = v
        self.cofactor = rest
        omega = np.zeros(X + 1, dtype=np.int64)
        for k in range(2, X + 1):
            omega[k] = omega[rest[k]] + 1
        self.rounds = [np.flatnonzero(omega == w) for w in range(1, int(omega.max(initial=0)) + 1)]
        self.depth = max_depth(2, X) if X >= 2 else 0


@lru_cache(maxsize=8)
def factor_table(X: int) -> FactorTable:
    return FactorTable(X)


def assemble_multiplicative(local: np.ndarray, X: int) -> np.ndarray:
    """Build ``a(1..X)`` from local coefficients.

    ``local[i, v]`` is the coefficient of ``p_i**v`` where ``p_i`` is the i-th prime
    ``<= X``. Returns an array indexed from 0 with ``a[0] = 0`` and ``a[1] = 1``.
    """
    table = factor_table(X)
    out = np.zeros(X + 1, dtype=local.dtype)
    if X >= 1:
        out[1] = 1
    for idx in table.rounds:
        out[idx] = local[table.prime_index[idx], table.exponent[idx]] * out[table.cofactor[idx]]
    return out


def dirichlet_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dirichlet convolution of two sequences indexed from 0 (entry 0 ignored)."""
    X = min(len(a), len(b)) - 1
    out = np.zeros(X + 1, dtype=np.result_type(a, b))
    for d in range(1, X + 1):
        if a[d] == 0:
            continue
        top = X // d
        out[d : d * top + 1 : d] += a[d] * b[1 : top + 1]
    return out


def divisor_k(k: int, X: int) -> np.ndarray:
    """``d_k(m)`` for ``0 <= m <= X`` as floats; ``d_k`` counts ordered k-factorizations."""
    X_int = int(X)
    depth = max_depth(2, X_int) if X_int >= 2 else 0
    primes = primes_up_to(X_int)
    local = np.array([[comb(v + k - 1, k - 1) for v in range(depth + 1)]], dtype=float)
    local = np.repeat(local, max(primes.size, 1), axis=0)
    return assemble_multiplicative(local, X_int)
