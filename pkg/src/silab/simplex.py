"""Dense two-phase simplex solver for small linear programs.

The problems solved here are tiny (at most a few hundred variables), so the
solver is a dense tableau method with Bland's anti-cycling pivot rule.  That
rule makes every solve deterministic: identical inputs give bitwise-identical
solutions.  The pivot loop is the hot kernel; a compiled Cython backend is
used when available and a pure-numpy fallback otherwise, both producing
bit-for-bit the same arithmetic (see ``_simplex_py`` / ``_simplex_cy``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _simplex_py

_KERNELS = {"python": _simplex_py}
try:
    from . import _simplex_cy

    _KERNELS["cython"] = _simplex_cy
except ImportError:  # extension not built; numpy fallback is fully equivalent
    _simplex_cy = None

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_env = os.environ.get("SILAB_SIMPLEX_BACKEND")
if _env is not None and _env not in _KERNELS:
    raise ImportError(
        f"SILAB_SIMPLEX_BACKEND={_env!r} not available; have {sorted(_KERNELS)}"
    )
_default_backend = _env if _env is not None else ("cython" if "cython" in _KERNELS else "python")


def available_backends() -> list[str]:
    return sorted(_KERNELS)


def default_backend() -> str:
    return _default_backend


class SolverError(RuntimeError):
    """Raised when the simplex iteration fails (e.g. hits the iteration cap)."""


@dataclass(frozen=True)
class LinearProgram:
    """A small dense LP: optimize objective @ x subject to
    a_eq @ x = b_eq, a_ub @ x <= b_ub, x >= lower_bounds.

    Lower bounds must be finite (default 0); the solver shifts them out.
    """

    objective: np.ndarray
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lower_bounds: np.ndarray | None = None
    maximize: bool = False

    def canonical(self):
        """Validate and return (c, a_eq, b_eq, a_ub, b_ub, lb) as float64 arrays."""
        c = np.ascontiguousarray(self.objective, dtype=np.float64)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("objective must be a nonempty 1-D vector")
        n = c.size

        def pair(a, b, name):
            if a is None and b is None:
                return np.zeros((0, n)), np.zeros(0)
            if a is None or b is None:
                raise ValueError(f"{name}: matrix and rhs must be given together")
            a = np.ascontiguousarray(a, dtype=np.float64)
            b = np.ascontiguousarray(b, dtype=np.float64)
            if a.ndim != 2 or a.shape[1] != n:
                raise ValueError(f"{name}: matrix must be 2-D with {n} columns")
            if b.shape != (a.shape[0],):
                raise ValueError(f"{name}: rhs length {b.shape} != rows {a.shape[0]}")
            return a, b

        a_eq, b_eq = pair(self.a_eq, self.b_eq, "equality constraints")
        a_ub, b_ub = pair(self.a_ub, self.b_ub, "inequality constraints")
        if self.lower_bounds is None:
            lb = np.zeros(n)
        else:
            lb = np.ascontiguousarray(self.lower_bounds, dtype=np.float64)
            if lb.shape != (n,):
                raise ValueError("lower_bounds length mismatch")
        for arr, name in ((c, "objective"), (a_eq, "a_eq"), (b_eq, "b_eq"),
                          (a_ub, "a_ub"), (b_ub, "b_ub"), (lb, "lower_bounds")):
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        return c, a_eq, b_eq, a_ub, b_ub, lb


@dataclass(frozen=True)
class LpSolution:
    x: np.ndarray
    status: str
    objective: float
    iterations: int
    backend: str = field(default="", compare=False)


def solve_lp(lp: LinearProgram, tol: float = 1e-9, max_iter: int = 100_000,
             backend: str | None = None) -> LpSolution:
    """Solve a LinearProgram with the two-phase dense simplex method.

    Returns an LpSolution whose status is "optimal", "infeasible" or
    "unbounded"; x is all-nan unless optimal.  Deterministic: Bland's rule,
    fixed row order, fixed elimination order.
    """
    name = backend if backend is not None else _default_backend
    if name not in _KERNELS:
        raise ValueError(f"unknown backend {name!r}; have {sorted(_KERNELS)}")
    kernel = _KERNELS[name]

    c, a_eq, b_eq, a_ub, b_ub, lb = lp.canonical()
    n = c.size
    me, mu = a_eq.shape[0], a_ub.shape[0]
    m = me + mu

    # Shift lower bounds to zero: x = y + lb.
    b_eq = b_eq - a_eq @ lb
    b_ub = b_ub - a_ub @ lb

    # Standard form rows: [A_eq | 0] y = b_eq, [A_ub | I] (y, s) = b_ub.
    n_slack = mu
    a = np.zeros((m, n + n_slack))
    b = np.zeros(m)
    a[:me, :n] = a_eq
    b[:me] = b_eq
    a[me:, :n] = a_ub
    a[me:, n:] = np.eye(mu)
    b[me:] = b_ub

    neg = b < 0.0
    a[neg] = -a[neg]
    b[neg] = -b[neg]

    # Initial basis: slack where it survived with +1 coefficient, else artificial.
    basis = np.full(m, -1, dtype=np.int64)
    needs_art = np.ones(m, dtype=bool)
    for i in range(me, m):
        if not neg[i]:
            basis[i] = n + (i - me)
            needs_art[i] = False

    art_rows = np.flatnonzero(needs_art)
    n_art = art_rows.size
    n_total = n + n_slack + n_art
    tableau = np.zeros((m + 1, n_total + 1))
    tableau[:m, : n + n_slack] = a
    tableau[:m, n_total] = b
    for k, i in enumerate(art_rows):
        tableau[i, n + n_slack + k] = 1.0
        basis[i] = n + n_slack + k

    # Phase 1: minimize the sum of artificials.
    if n_art:
        tableau[m, n + n_slack : n_total] = 1.0
        for i in art_rows:
            tableau[m] -= tableau[i]
        status, it1 = kernel.run_simplex(tableau, basis, tol, max_iter)
        if status == _simplex_py.ITERATION_LIMIT:
            raise SolverError(f"phase 1 exceeded {max_iter} iterations (m={m}, n={n_total})")
        phase1 = -tableau[m, n_total]
        if phase1 > tol * (1.0 + np.abs(b).max(initial=0.0)):
            return LpSolution(np.full(n, np.nan), INFEASIBLE, np.nan, it1, name)
        _drive_out_artificials(tableau, basis, n + n_slack, tol)
    else:
        it1 = 0

    # Phase 2 on the structural + slack columns only.
    tableau2 = np.ascontiguousarray(
        np.hstack([tableau[:m, : n + n_slack], tableau[:m, n_total:]])
    )
    keep = basis < n + n_slack
    if not np.all(keep):
        # Redundant rows whose artificial could not be driven out.
        tableau2 = np.ascontiguousarray(tableau2[keep])
        basis = basis[keep]
    m2 = tableau2.shape[0]

    c_std = np.zeros(n + n_slack)
    c_std[:n] = -c if lp.maximize else c
    costrow = np.concatenate([c_std, [0.0]])
    for i in range(m2):
        cb = c_std[basis[i]]
        costrow = costrow - cb * tableau2[i]
    full = np.ascontiguousarray(np.vstack([tableau2, costrow]))

    status, it2 = kernel.run_simplex(full, basis, tol, max_iter)
    if status == _simplex_py.ITERATION_LIMIT:
        raise SolverError(f"phase 2 exceeded {max_iter} iterations (m={m2}, n={n + n_slack})")
    iterations = it1 + it2
    if status == _simplex_py.UNBOUNDED:
        return LpSolution(np.full(n, np.nan), UNBOUNDED, np.nan, iterations, name)

    y = np.zeros(n + n_slack)
    y[basis] = full[:m2, -1]
    x = y[:n] + lb
    return LpSolution(x, OPTIMAL, float(c @ x), iterations, name)


def _drive_out_artificials(tableau: np.ndarray, basis: np.ndarray,
                           n_real: int, tol: float) -> None:
    """Pivot basic artificial variables out on any usable real column.

    Runs in shared Python code for both backends, so it cannot introduce
    backend-dependent rounding.  Rows with no usable column are redundant and
    left for the caller to drop.
    """
    for i in range(basis.size):
        if basis[i] < n_real:
            continue
        row = tableau[i, :n_real]
        cols = np.flatnonzero(np.abs(row) > tol)
        if cols.size:
            _simplex_py.pivot(tableau, basis, i, int(cols[0]))
