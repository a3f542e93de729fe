"""Pure-Python (numpy) tableau kernel for the dense simplex solver.

This is the fallback backend; ``_simplex_cy`` is an operation-for-operation
compiled mirror of it.  Both run Bland's pivot rule with the same
floating-point operation order, so the two backends produce bitwise-identical
tableaus and solutions.
"""

from __future__ import annotations

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def pivot(tableau: np.ndarray, basis: np.ndarray, leave: int, enter: int) -> None:
    """Pivot the tableau about (leave, enter) in place.

    The pivot column is snapshotted before elimination and the column is
    forced to exact 0/1 afterwards; the compiled kernel does the same, which
    keeps the backends bit-for-bit in sync.
    """
    row = tableau[leave]
    row /= tableau[leave, enter]
    col = tableau[:, enter].copy()
    col[leave] = 0.0
    tableau -= col[:, None] * row[None, :]
    tableau[:, enter] = 0.0
    tableau[leave, enter] = 1.0
    basis[leave] = enter


def run_simplex(tableau: np.ndarray, basis: np.ndarray, tol: float, max_iter: int):
    """Run Bland-rule simplex iterations on a tableau, in place.

    tableau is (m+1, n+1) float64 and C-contiguous: rows 0..m-1 are the
    constraint rows with the right-hand side in the last column, row m is the
    reduced-cost row with the negated objective value in its last cell.
    basis holds the basic column of each constraint row (int64, distinct).

    Entering column: smallest index with reduced cost < -tol.  Leaving row:
    minimum ratio, ties broken by smallest basic column label.  Returns
    (status, iterations).
    """
    m = tableau.shape[0] - 1
    n = tableau.shape[1] - 1
    cost = tableau[m, :n]
    rhs = tableau[:m, n]
    for it in range(max_iter):
        neg = np.flatnonzero(cost < -tol)
        if neg.size == 0:
            return OPTIMAL, it
        enter = int(neg[0])
        col = tableau[:m, enter]
        mask = col > tol
        if not mask.any():
            return UNBOUNDED, it
        ratios = np.full(m, np.inf)
        np.divide(rhs, col, out=ratios, where=mask)
        best = ratios.min()
        cand = np.flatnonzero(ratios == best)
        if cand.size == 1:
            leave = int(cand[0])
        else:
            leave = int(cand[np.argmin(basis[cand])])
        pivot(tableau, basis, leave, enter)
    return ITERATION_LIMIT, max_iter
