"""Dense Gaussian elimination over a prime field F_p on numpy int arrays."""

from __future__ import annotations

import numpy as np


def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form mod p with zero rows dropped.

    Returns (R, pivots) where R has one row per pivot column.
    """
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    inv = _inverses(p)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * inv[a[r, c]] % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def rank(mat: np.ndarray, p: int) -> int:
    return len(rref(mat, p)[1])


def nullspace(mat: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {x : mat @ x = 0 mod p}, in RREF."""
    mat = np.asarray(mat, dtype=np.int64)
    if ncols is None:
        ncols = mat.shape[1]
    if mat.size == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref(mat, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = -r[row, f] % p
    if basis.shape[0] == 0:
        return basis
    return rref(basis, p)[0]


def in_rowspace(vecs: np.ndarray, basis_rref: np.ndarray, pivots: tuple[int, ...], p: int) -> np.ndarray:
    """Row-wise membership of vecs in the span of an RREF basis.

    Reduces each vector by the pivot rows; members reduce to zero.
    """
    v = np.atleast_2d(np.asarray(vecs, dtype=np.int64)) % p
    if len(pivots):
        coeffs = v[:, list(pivots)]
        v = (v - coeffs @ basis_rref) % p
    return ~v.any(axis=1)


def intersect_rowspaces(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """RREF basis of rowspace(a) ∩ rowspace(b)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    ncols = a.shape[1] if a.size else b.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    # x a = y b  <=>  [x, -y] . [a; b] = 0
    stacked = np.vstack([a, b]).T
    ker = nullspace(stacked, p)
    if ker.shape[0] == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    inter = ker[:, : a.shape[0]] @ a % p
    return rref(inter, p)[0]
