"""Exact linear algebra over a prime field F_p.

Matrices are plain two-dimensional ``numpy`` integer arrays whose entries
are kept reduced into ``range(p)``.  Every function takes the modulus
explicitly; nothing here rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FieldPrime",
    "as_matrix",
    "zeros",
    "identity",
    "matmul",
    "rref",
    "rank",
    "solve",
    "kernel_basis",
    "column_basis",
    "inverse",
    "is_invertible",
    "SpanBuilder",
]

DTYPE = np.int64


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldPrime:
    """The prime field F_p."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise ValueError(f"{self.p!r} is not a prime")
        object.__setattr__(self, "p", int(self.p))

    def __str__(self):
        return f"F_{self.p}"

    def inv(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)


def as_matrix(entries, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Coerce ``entries`` to a reduced 2-d integer array."""
    a = np.array(entries, dtype=DTYPE)
    if shape is not None:
        a = a.reshape(shape)
    elif a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {a.shape}")
    return a % p


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=DTYPE)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=DTYPE)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    inner = a.shape[1]
    # float64 BLAS is exact while every partial sum stays below 2**53
    if (p - 1) * (p - 1) * max(inner, 1) < 2**52:
        out = np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(DTYPE)
        return out % p
    if (p - 1) * (p - 1) * max(inner, 1) < 2**63:
        return (a @ b) % p
    # products would overflow int64
    return ((a.astype(object) @ b.astype(object)) % p).astype(DTYPE)


def rref(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``m`` and its pivot columns."""
    a = np.array(m, dtype=DTYPE) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r, c:] = (a[r, c:] * pow(lead, -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit, c:] = (a[hit, c:] - np.outer(col[hit], a[r, c:])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray, p: int) -> int:
    if m.size == 0:
        return 0
    # eliminate along the shorter side
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(rref(m, p)[1])


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Return X with ``a @ X == b`` (free variables set to 0), or None."""
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    aug = np.concatenate([a % p, b % p], axis=1)
    r, piv = rref(aug, p)
    if piv and piv[-1] >= n:
        return None
    x = zeros(n, b.shape[1])
    for row, c in enumerate(piv):
        x[c] = r[row, n:]
    return x


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Columns form a basis of the null space of ``a``."""
    cols = a.shape[1]
    r, piv = rref(a, p)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    k = zeros(cols, len(free))
    if free:
        k[free, range(len(free))] = 1
        if piv:
            k[np.ix_(piv, range(len(free)))] = (-r[: len(piv)][:, free]) % p
    return k


def column_basis(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced basis of the column space (as columns) and its pivot rows."""
    r, piv = rref(a.T, p)
    return r[: len(piv)].T.copy(), piv


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    x = solve(a, identity(n), p)
    if x is None or rank(a, p) != n:
        raise ValueError("matrix is singular")
    return x


def is_invertible(a: np.ndarray, p: int) -> bool:
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


class SpanBuilder:
    """Incrementally maintained echelon basis of a subspace of F_p^n.

    Used wherever a deterministic greedy choice of independent vectors is
    needed (module generators, relation generators, cell selection).
    """

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self._rows: list[np.ndarray] = []
        self._pivots: list[int] = []

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        w = np.array(v, dtype=DTYPE).reshape(-1) % self.p
        for row, c in zip(self._rows, self._pivots):
            if w[c]:
                w = (w - w[c] * row) % self.p
        return w

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def add(self, v: np.ndarray) -> bool:
        """Add ``v``; return True when it enlarged the span."""
        w = self.reduce(v)
        nz = np.flatnonzero(w)
        if nz.size == 0:
            return False
        c = int(nz[0])
        w = (w * pow(int(w[c]), -1, self.p)) % self.p
        for i, row in enumerate(self._rows):
            if row[c]:
                self._rows[i] = (row - row[c] * w) % self.p
        self._rows.append(w)
        self._pivots.append(c)
        return True

    def add_many(self, vs) -> int:
        return sum(self.add(v) for v in vs)
