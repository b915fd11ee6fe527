"""Prime-field scalars and dense linear algebra mod p.

Everything downstream stores F_p scalars as plain ints in [0, p); the
``Fp`` wrapper exists for the places where a self-describing value is
nicer to pass around (CLI output, tests).  The matrix kernels use numpy
int64 arrays; all sizes here are small enough (< 1000) that overflow is
impossible since entries stay reduced mod p.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SUPPORTED_PRIMES = (3, 5, 7, 11, 13)


def check_prime(p: int) -> None:
    if p < 3 or p not in _SUPPORTED_PRIMES:
        raise ValueError(f"p must be an odd prime > 2, got {p}")


def fp_inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


def factorial_mod(k: int, p: int) -> int:
    """k! mod p for 0 <= k < p (larger k would vanish and is a bug here)."""
    if k >= p:
        raise ValueError(f"factorial {k}! not invertible mod {p}")
    r = 1
    for i in range(2, k + 1):
        r = r * i % p
    return r


def binom_mod(n: int, k: int, p: int) -> int:
    """Binomial coefficient mod p for small integer arguments."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num = num * (n - i)
        den = den * (i + 1)
    return (num // den) % p


@dataclass(frozen=True)
class Fp:
    """A residue mod an odd prime p > 2."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixed characteristics")
            return other
        if isinstance(other, int):
            return Fp(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return Fp(self.value + o.value, self.p)

    __radd__ = __add__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        return Fp(self.value - o.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return Fp(self.value * o.value, self.p)

    __rmul__ = __mul__

    def inv(self) -> "Fp":
        return Fp(fp_inv(self.value, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        return self * o.inv()

    def __pow__(self, k: int):
        return Fp(pow(self.value, k, self.p), self.p)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


# ---------------------------------------------------------------------------
# dense mod-p linear algebra (numpy int64, entries kept in [0, p))
# ---------------------------------------------------------------------------

def _as_modp(a, p: int) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64) % p
    return m


def rref_modp(a, p: int):
    """Row-reduce mod p.

    Returns (R, pivots) where R is the reduced row echelon form and
    pivots the list of pivot column indices.
    """
    m = _as_modp(a, p).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = m[r] * fp_inv(int(m[r, c]), p) % p
        for j in range(rows):
            if j != r and m[j, c] != 0:
                m[j] = (m[j] - m[j, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_modp(a, p: int) -> int:
    _, piv = rref_modp(a, p)
    return len(piv)


def solve_modp(a, b, p: int):
    """One solution x of a @ x = b mod p, or None if inconsistent.

    b may be a vector or a matrix of stacked right-hand sides.
    """
    A = _as_modp(a, p)
    B = _as_modp(b, p)
    vec = B.ndim == 1
    if vec:
        B = B[:, None]
    rows, cols = A.shape
    aug = np.concatenate([A, B], axis=1)
    R, piv = rref_modp(aug, p)
    for i in range(len(piv), rows):
        if np.any(R[i, cols:] % p):
            return None
    if any(c >= cols for c in piv):
        return None
    x = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, cols:]
    return x[:, 0] if vec else x


def inv_modp(a, p: int):
    A = _as_modp(a, p)
    n = A.shape[0]
    x = solve_modp(A, np.eye(n, dtype=np.int64), p)
    if x is None:
        raise ZeroDivisionError("matrix not invertible mod p")
    return x


def nullspace_modp(a, p: int):
    """Basis of the right kernel mod p, as rows of the returned matrix."""
    A = _as_modp(a, p)
    rows, cols = A.shape
    R, piv = rref_modp(A, p)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(piv):
            basis[k, c] = (-R[i, f]) % p
    return basis
