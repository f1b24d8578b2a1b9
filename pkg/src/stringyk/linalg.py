"""Exact linear algebra on numpy object arrays of Cyclotomic entries."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .cyclotomic import Cyclotomic, as_cyclotomic

ZERO = Cyclotomic(0)
ONE = Cyclotomic(1)


def matrix(rows: Iterable[Iterable]) -> np.ndarray:
    rows = [[as_cyclotomic(x) for x in r] for r in rows]
    if not rows:
        return np.empty((0, 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != out.shape[1]:
            raise ValueError("ragged matrix")
        out[i, :] = r
    return out


def zeros(n: int, m: int | None = None) -> np.ndarray:
    out = np.empty((n, n if m is None else m), dtype=object)
    out.fill(ZERO)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n)
    for i in range(n):
        out[i, i] = ONE
    return out


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=object)
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return np.vectorize(as_cyclotomic, otypes=[object])(a) if a.size else a.reshape(a.shape)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a @ b


def trace(a: np.ndarray) -> Cyclotomic:
    t = ZERO
    for i in range(a.shape[0]):
        t = t + a[i, i]
    return t


def is_zero(a: np.ndarray) -> bool:
    return all(not x for x in a.flat)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(a, dtype=object, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i, c]), None)
        if piv is None:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = m[r, c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i, c]:
                f = m[i, c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> list[np.ndarray]:
    """Basis of {x : a x = 0} as a list of 1-d object vectors."""
    rows, cols = a.shape
    r, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.empty(cols, dtype=object)
        v.fill(ZERO)
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(v)
    return basis


def inverse(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([a, identity(n)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return r[:, n:]


def solve(a: np.ndarray, b: Sequence) -> np.ndarray:
    """The unique x with a x = b (a square and invertible)."""
    b = np.asarray([as_cyclotomic(x) for x in b], dtype=object).reshape(-1, 1)
    return matmul(inverse(a), b).reshape(-1)


def column_basis(a: np.ndarray) -> np.ndarray:
    """Columns of a at its pivot positions: a basis of its column space."""
    _, pivots = rref(a)
    return a[:, pivots]


def block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = zeros(n, m)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, m = a.shape
    p, q = b.shape
    out = zeros(n * p, m * q)
    for i in range(n):
        for j in range(m):
            x = a[i, j]
            if x:
                out[i * p : (i + 1) * p, j * q : (j + 1) * q] = [[x * y for y in row] for row in b]
    return out


def to_complex(a: np.ndarray) -> np.ndarray:
    return np.vectorize(complex, otypes=[complex])(a)
