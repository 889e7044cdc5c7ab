# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex kernels; mirrors ``_kernels_py`` operation for operation."""

from libc.math cimport fabs


def pivot(double[:, ::1] T, Py_ssize_t row, Py_ssize_t col):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t nrows = T.shape[0]
    cdef Py_ssize_t ncols = T.shape[1]
    cdef double piv = T[row, col]
    cdef double f
    for j in range(ncols):
        T[row, j] = T[row, j] / piv
    for i in range(nrows):
        if i == row:
            continue
        f = T[i, col]
        if f == 0.0:
            continue
        for j in range(ncols):
            T[i, j] = T[i, j] - f * T[row, j]


def bland_entering(double[:, ::1] T, Py_ssize_t cost_row, Py_ssize_t ncols, double eps):
    cdef Py_ssize_t j
    for j in range(ncols):
        if T[cost_row, j] < -eps:
            return j
    return -1


def ratio_test(double[:, ::1] T, Py_ssize_t col, long[::1] basis, double eps, double tie_tol):
    cdef Py_ssize_t i
    cdef Py_ssize_t rhs = T.shape[1] - 1
    cdef Py_ssize_t best = -1
    cdef double best_ratio = 0.0
    cdef double a, ratio, scale
    for i in range(basis.shape[0]):
        a = T[i, col]
        if a <= eps:
            continue
        ratio = T[i, rhs] / a
        if best < 0:
            best = i
            best_ratio = ratio
            continue
        scale = fabs(best_ratio)
        if scale < 1.0:
            scale = 1.0
        if ratio < best_ratio - tie_tol * scale:
            best = i
            best_ratio = ratio
        elif ratio <= best_ratio + tie_tol * scale and basis[i] < basis[best]:
            best = i
            best_ratio = ratio
    return best
