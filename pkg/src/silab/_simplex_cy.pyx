# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tableau kernel for the dense simplex solver.

Operation-for-operation mirror of ``_simplex_py.run_simplex`` (see there for
the contract).  The pivot column and the normalized pivot row are snapshotted
before elimination, exactly like the numpy version, and the extension is
compiled with FP contraction disabled, so both backends round identically.
"""

import numpy as np

from libc.math cimport INFINITY

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def run_simplex(double[:, ::1] tableau, long long[::1] basis, double tol, long max_iter):
    cdef Py_ssize_t m = tableau.shape[0] - 1
    cdef Py_ssize_t n = tableau.shape[1] - 1
    cdef double[::1] col = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] prow = np.empty(n + 1, dtype=np.float64)
    cdef Py_ssize_t it, i, j, enter, leave
    cdef double piv, ratio, best, factor

    for it in range(max_iter):
        # Bland entering rule: first column with negative reduced cost.
        enter = -1
        for j in range(n):
            if tableau[m, j] < -tol:
                enter = j
                break
        if enter < 0:
            return OPTIMAL, it

        # Ratio test; ties broken by smallest basic column label.
        leave = -1
        best = INFINITY
        for i in range(m):
            piv = tableau[i, enter]
            if piv > tol:
                ratio = tableau[i, n] / piv
                if ratio < best:
                    best = ratio
                    leave = i
                elif ratio == best and leave >= 0 and basis[i] < basis[leave]:
                    leave = i
        if leave < 0:
            return UNBOUNDED, it

        piv = tableau[leave, enter]
        for j in range(n + 1):
            tableau[leave, j] = tableau[leave, j] / piv
        for j in range(n + 1):
            prow[j] = tableau[leave, j]
        for i in range(m + 1):
            col[i] = tableau[i, enter]
        col[leave] = 0.0
        for i in range(m + 1):
            factor = col[i]
            for j in range(n + 1):
                tableau[i, j] = tableau[i, j] - factor * prow[j]
        for i in range(m + 1):
            tableau[i, enter] = 0.0
        tableau[leave, enter] = 1.0
        basis[leave] = enter

    return ITERATION_LIMIT, max_iter
