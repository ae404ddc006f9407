"""Pfaffians of real antisymmetric matrices."""
from __future__ import annotations

import numpy as np

__all__ = ["SkewMatrix", "pfaffian", "skew_matrix"]


class SkewMatrix(np.ndarray):
    """Marker subclass for an exactly antisymmetric real matrix of even order."""


def skew_matrix(entry, indices) -> SkewMatrix:
    """Build A[a, b] = entry(i_a, i_b) for a < b and fill the rest by antisymmetry."""
    n = len(indices)
    a = np.zeros((n, n))
    for r in range(n):
        for c in range(r + 1, n):
            v = entry(indices[r], indices[c])
            a[r, c] = v
            a[c, r] = -v
    return a.view(SkewMatrix)


def pfaffian(a) -> float:
    """Pf(A) by skew-symmetric Gauss elimination with partial pivoting.

    Each step pivots the largest entry of the current column into the
    subdiagonal slot and eliminates the remaining rows and columns with a
    rank-two update, which keeps the trailing block antisymmetric.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("pfaffian needs a square matrix")
    n = a.shape[0]
    if n % 2:
        raise ValueError(f"Pfaffian of odd order {n} is undefined")
    if not np.array_equal(a, -a.T):
        raise ValueError("matrix is not exactly antisymmetric")
    pf = 1.0
    for k in range(0, n - 1, 2):
        piv = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if piv != k + 1:
            a[[k + 1, piv], :] = a[[piv, k + 1], :]
            a[:, [k + 1, piv]] = a[:, [piv, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0.0:
            return 0.0
        pf *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2:] / a[k, k + 1]
            col = a[k + 2:, k + 1].copy()
            a[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)
