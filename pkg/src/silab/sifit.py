"""Fitting setting-dependent hidden-state distributions to target correlations.

The free move a factorizable model has left, once the response tables are
fixed, is letting the distribution over hidden states depend on the setting
pair.  ``fit_conditional_distributions`` finds the least such dependence that
reproduces a target correlation table: it minimizes the largest entrywise gap
between the four pair-conditioned distributions and a common reference
distribution.  A zero optimum certifies the targets as reachable without any
setting dependence; CHSH-violating targets force a strictly positive optimum.

``max_chsh_under_si`` is the complementary bound: the best CHSH value any
single shared distribution can reach, which is 2 for deterministic strategies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import (
    ConditionalDistribution,
    CorrelationTable,
    HiddenState,
    HiddenVariableModel,
    ResponseTable,
    chsh,
    deterministic_response_table,
    enumerate_deterministic_models,
    model_to_json,
)
from .simplex import INFEASIBLE, OPTIMAL, LinearProgram, solve_lp


@dataclass(frozen=True)
class FitResult:
    """Outcome of a distribution fit.

    residual is the largest absolute mismatch between the model correlations
    and the targets; epsilon the fitted setting-dependence level (the LP
    objective).  model is None unless status is "optimal".
    """

    model: HiddenVariableModel | None
    residual: float
    epsilon: float
    status: str

    def to_json_dict(self) -> dict:
        import json

        doc = {
            "status": self.status,
            "epsilon": self.epsilon,
            "residual": self.residual,
        }
        if self.model is not None:
            doc["chsh"] = chsh(self.model)
            doc["model"] = json.loads(model_to_json(self.model))
        return doc


def _pair_coefficients(responses: ResponseTable) -> np.ndarray:
    """Per-pair product coefficients c[p, s] = Abar(a_p, s) * Bbar(b_p, s),
    pair order (a1b1, a1b2, a2b1, a2b2)."""
    ia = (0, 0, 1, 1)
    ib = (0, 1, 0, 1)
    return np.array([responses.abar[ia[p]] * responses.bbar[ib[p]] for p in range(4)])


def max_chsh_under_si(states: list[HiddenState] | None = None,
                      responses: ResponseTable | None = None,
                      backend: str | None = None) -> float:
    """Maximum CHSH value over a single shared distribution P(state).

    The two absolute values are linearized by solving one LP per sign
    pattern and taking the best.  For any deterministic state set the
    optimum is 2.
    """
    if states is None:
        states = enumerate_deterministic_models()
    if responses is None:
        responses = deterministic_response_table(states)
    coef = _pair_coefficients(responses)
    n = responses.n_states
    a_eq = np.ones((1, n))
    b_eq = np.ones(1)
    best = -np.inf
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            c = s1 * (coef[0] - coef[1]) + s2 * (coef[3] + coef[2])
            lp = LinearProgram(objective=c, a_eq=a_eq, b_eq=b_eq, maximize=True)
            sol = solve_lp(lp, backend=backend)
            if sol.status != OPTIMAL:
                raise RuntimeError(f"shared-distribution CHSH bound LP returned {sol.status}")
            best = max(best, sol.objective)
    return best


def fit_conditional_distributions(targets: CorrelationTable,
                                  states: list[HiddenState] | None = None,
                                  match_marginals: bool = True,
                                  responses: ResponseTable | None = None,
                                  backend: str | None = None) -> FitResult:
    """Fit per-pair distributions reproducing ``targets`` with minimal
    setting dependence.

    One LP over variables (P_p(s) for the 4 pairs, a reference Q(s), and a
    scalar eps): each P_p is a distribution hitting its target correlation
    exactly, Q is a distribution, |P_p(s) - Q(s)| <= eps everywhere, and eps
    is minimized.  With match_marginals the one-sided expectations of each
    P_p are pinned to zero as well.
    """
    if states is None:
        states = enumerate_deterministic_models()
    if responses is None:
        responses = deterministic_response_table(states)
    coef = _pair_coefficients(responses)
    n = responses.n_states
    t = targets.as_pair_vector()

    nv = 5 * n + 1  # 4 x P_p, Q, eps
    eps_col = nv - 1

    def p_slice(p):
        return slice(p * n, (p + 1) * n)

    q_slice = slice(4 * n, 5 * n)

    eq_rows = []
    eq_rhs = []
    for p in range(4):  # per-pair normalization
        row = np.zeros(nv)
        row[p_slice(p)] = 1.0
        eq_rows.append(row)
        eq_rhs.append(1.0)
    row = np.zeros(nv)  # reference distribution normalization
    row[q_slice] = 1.0
    eq_rows.append(row)
    eq_rhs.append(1.0)
    for p in range(4):  # target correlations
        row = np.zeros(nv)
        row[p_slice(p)] = coef[p]
        eq_rows.append(row)
        eq_rhs.append(t[p])
    if match_marginals:
        ia = (0, 0, 1, 1)
        ib = (0, 1, 0, 1)
        for p in range(4):
            row = np.zeros(nv)
            row[p_slice(p)] = responses.abar[ia[p]]
            eq_rows.append(row)
            eq_rhs.append(0.0)
            row = np.zeros(nv)
            row[p_slice(p)] = responses.bbar[ib[p]]
            eq_rows.append(row)
            eq_rhs.append(0.0)

    ub_rows = np.zeros((8 * n, nv))
    k = 0
    for p in range(4):  # |P_p - Q| <= eps, both sides
        for s in range(n):
            ub_rows[k, p * n + s] = 1.0
            ub_rows[k, 4 * n + s] = -1.0
            ub_rows[k, eps_col] = -1.0
            k += 1
            ub_rows[k, p * n + s] = -1.0
            ub_rows[k, 4 * n + s] = 1.0
            ub_rows[k, eps_col] = -1.0
            k += 1

    c = np.zeros(nv)
    c[eps_col] = 1.0
    lp = LinearProgram(objective=c, a_eq=np.array(eq_rows), b_eq=np.array(eq_rhs),
                       a_ub=ub_rows, b_ub=np.zeros(8 * n))
    sol = solve_lp(lp, backend=backend)

    if sol.status != OPTIMAL:
        return FitResult(model=None, residual=np.nan, epsilon=np.nan, status=sol.status)

    # LP roundoff can leave distribution entries a few ulp below zero.
    x = np.maximum(sol.x, 0.0)
    p = x[: 4 * n].reshape(4, n)
    model = HiddenVariableModel(tuple(states), responses, ConditionalDistribution(p))
    residual = float(np.max(np.abs((p * coef).sum(axis=1) - t)))
    return FitResult(model=model, residual=residual, epsilon=float(sol.x[eps_col]),
                     status=OPTIMAL)


def si_violation(model: HiddenVariableModel) -> float:
    """Largest total variation distance between any pair-conditioned
    distribution and the average over the four pairs."""
    p = model.dist.p
    avg = p.mean(axis=0)
    return float(max(0.5 * np.abs(p[i] - avg).sum() for i in range(4)))
