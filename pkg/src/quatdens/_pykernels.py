"""Pure numpy versions of the enumeration kernels.

Quaternion arrays have a trailing axis of length 4 holding (a, b, c, d).
Every function here has a compiled twin in ``_ckernels`` with the same
signature; ``quatdens.kernels`` picks one at import time.
"""

from __future__ import annotations

import numpy as np


def qmul(x: np.ndarray, y: np.ndarray, p: int, e: int, M: int) -> np.ndarray:
    a1, b1, c1, d1 = (x[..., i] for i in range(4))
    a2, b2, c2, d2 = (y[..., i] for i in range(4))
    out = np.stack([
        a1 * a2 + e * b1 * b2 + p * (c1 * c2 - e * d1 * d2),
        a1 * b2 + b1 * a2 + p * (c1 * d2 - d1 * c2),
        c1 * a2 + e * d1 * b2 + a1 * c2 - e * b1 * d2,
        c1 * b2 + d1 * a2 + a1 * d2 - b1 * c2,
    ], axis=-1)
    return np.mod(out, M)


def star(x: np.ndarray) -> np.ndarray:
    out = -x
    out[..., 0] = x[..., 0]
    return out


def sesq(X: np.ndarray, A: np.ndarray, Y: np.ndarray, p: int, e: int, M: int) -> np.ndarray:
    """x^* A y for stacks of column vectors X (..., m, 4) and Y (..., m, 4)."""
    m = A.shape[0]
    acc = np.zeros(np.broadcast_shapes(X.shape[:-2], Y.shape[:-2]) + (4,), dtype=np.int64)
    Xs = star(X)
    for i in range(m):
        for j in range(m):
            if not A[i, j].any():
                continue
            t = qmul(Xs[..., i, :], A[i, j], p, e, M)
            acc = acc + qmul(t, Y[..., j, :], p, e, M)
    return np.mod(acc, M)


def code_mod_P(z: np.ndarray, p: int, k: int) -> np.ndarray:
    """Index of z modulo P^k, in range(p^(2k)).

    Modulo P^(2j) all four coordinates are taken mod p^j; modulo P^(2j+1)
    the (a, b) pair is taken mod p^(j+1) and (c, d) mod p^j.
    """
    j, odd = divmod(k, 2)
    mu = p ** (j + odd)
    mz = p**j
    a, b, c, d = (z[..., i] for i in range(4))
    return ((np.mod(a, mu) * mu + np.mod(b, mu)) * mz + np.mod(c, mz)) * mz + np.mod(d, mz)


def pair_hist(X: np.ndarray, Y: np.ndarray, A: np.ndarray,
              gx: np.ndarray, gy: np.ndarray, ngx: int, ngy: int,
              p: int, e: int, level: int, koff: int, check_inv: bool) -> np.ndarray:
    """Histogram over pairs (x, y) of (group x, group y, code of x^* A y mod P^koff).

    X is (N1, m, 4), Y is (N2, m, 4).  With ``check_inv`` (m = 2 only) a pair
    counts only when the 2x2 matrix with columns x, y is invertible mod P.
    """
    M = p**level
    ncodes = p ** (2 * koff)
    hist = np.zeros((ngx, ngy, ncodes), dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    AY = np.zeros_like(Y)
    for i in range(A.shape[0]):
        for j in range(A.shape[0]):
            if A[i, j].any():
                AY[:, i, :] += qmul(np.broadcast_to(A[i, j], Y[:, j, :].shape), Y[:, j, :], p, e, M)
    AY = np.mod(AY, M)
    if check_inv:
        y0 = np.mod(Y[:, 0, :2], p)
        y1 = np.mod(Y[:, 1, :2], p)
    for ix in range(X.shape[0]):
        xs = star(X[ix])
        acc = np.zeros((Y.shape[0], 4), dtype=np.int64)
        for i in range(A.shape[0]):
            acc += qmul(np.broadcast_to(xs[i], AY[:, i, :].shape), AY[:, i, :], p, e, M)
        codes = code_mod_P(np.mod(acc, M), p, koff)
        keep = slice(None)
        if check_inv:
            x0a, x0b = X[ix, 0, 0] % p, X[ix, 0, 1] % p
            x1a, x1b = X[ix, 1, 0] % p, X[ix, 1, 1] % p
            # det = x0*y1 - y0*x1 in F_{p^2}
            da = x0a * y1[:, 0] + e * x0b * y1[:, 1] - (y0[:, 0] * x1a + e * y0[:, 1] * x1b)
            db = x0a * y1[:, 1] + x0b * y1[:, 0] - (y0[:, 0] * x1b + y0[:, 1] * x1a)
            keep = (np.mod(da, p) != 0) | (np.mod(db, p) != 0)
        flat = gy[keep] * ncodes + codes[keep]
        hist[gx[ix]] += np.bincount(flat, minlength=ngy * ncodes).reshape(ngy, ncodes)
    return hist
