"""silab: numerical experiments on Bell-CHSH correlations, hidden-variable
models with setting-dependent distributions, wave equations with nonlocal
constraints on initial data, and a two-qubit contextuality check."""

from .simplex import (
    LinearProgram,
    LpSolution,
    SolverError,
    available_backends,
    default_backend,
    solve_lp,
)

__version__ = "0.1.0"

__all__ = [
    "LinearProgram",
    "LpSolution",
    "SolverError",
    "available_backends",
    "default_backend",
    "solve_lp",
    "__version__",
]
