"""Pure-Python/numpy simplex kernels.

Reference implementation of the routines in ``_kernels.pyx``. Both versions
perform the same floating-point operations in the same order, so a solve is
bit-identical whichever backend is loaded.
"""
from __future__ import annotations

import numpy as np


def pivot(T: np.ndarray, row: int, col: int) -> None:
    """Pivot tableau ``T`` in place on entry ``(row, col)``."""
    T[row, :] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    rows = np.nonzero(factors)[0]
    if rows.size:
        T[rows, :] -= np.multiply.outer(factors[rows], T[row, :])


def bland_entering(T: np.ndarray, cost_row: int, ncols: int, eps: float) -> int:
    """Lowest column index below ``ncols`` with reduced cost < -eps, else -1."""
    costs = T[cost_row, :ncols]
    hits = np.nonzero(costs < -eps)[0]
    return int(hits[0]) if hits.size else -1


def ratio_test(
    T: np.ndarray, col: int, basis: np.ndarray, eps: float, tie_tol: float
) -> int:
    """Minimum-ratio leaving row; ties go to the lowest basic variable index."""
    rhs = T.shape[1] - 1
    best = -1
    best_ratio = 0.0
    for i in range(basis.shape[0]):
        a = T[i, col]
        if a <= eps:
            continue
        ratio = T[i, rhs] / a
        if best < 0:
            best, best_ratio = i, ratio
            continue
        scale = max(1.0, abs(best_ratio))
        if ratio < best_ratio - tie_tol * scale:
            best, best_ratio = i, ratio
        elif ratio <= best_ratio + tie_tol * scale and basis[i] < basis[best]:
            best, best_ratio = i, ratio
    return best
