"""Hidden-variable models for the two-detector, two-setting experiment.

A model is a finite set of hidden states, response tables Abar(a, state) and
Bbar(b, state) in [-1, 1], and one conditional distribution over states per
setting pair.  Response tables are factorizable by construction: no entry is
indexed by the distant setting, so the only place setting dependence can hide
is the distribution.  The quantum reference point is the spin singlet,
computed by explicit 4x4 matrix algebra.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

PAIR_KEYS = ("a1b1", "a1b2", "a2b1", "a2b2")
_PAIR_INDEX = {("a1", "b1"): 0, ("a1", "b2"): 1, ("a2", "b1"): 2, ("a2", "b2"): 3}

NORM_TOL = 1e-12
SI_TOL = 1e-9


@dataclass(frozen=True)
class Setting:
    """One detector setting: side "A" or "B", index 1 or 2, optional angle."""

    side: str
    index: int
    angle: float | None = None

    def __post_init__(self):
        if self.side not in ("A", "B"):
            raise ValueError(f"side must be 'A' or 'B', got {self.side!r}")
        if self.index not in (1, 2):
            raise ValueError(f"index must be 1 or 2, got {self.index!r}")
        if self.angle is not None and not np.isfinite(self.angle):
            raise ValueError("angle must be finite")

    @property
    def key(self) -> str:
        return f"{self.side.lower()}{self.index}"


@dataclass(frozen=True)
class HiddenState:
    """A hidden state: an index into the state space, optionally carrying the
    deterministic strategy (A(a1), A(a2), B(b1), B(b2)) it realizes."""

    id: int
    strategy: tuple[int, int, int, int] | None = None

    def __post_init__(self):
        if self.strategy is not None:
            if len(self.strategy) != 4 or any(v not in (-1, 1) for v in self.strategy):
                raise ValueError("strategy must be a 4-tuple of +-1")


@dataclass(frozen=True)
class ResponseTable:
    """Per-setting, per-state expected responses.

    abar[i, s] is the A-side response under setting index i+1 in state s;
    bbar likewise for the B side.  Entries live in [-1, 1].
    """

    abar: np.ndarray
    bbar: np.ndarray

    def __post_init__(self):
        abar = np.asarray(self.abar, dtype=np.float64)
        bbar = np.asarray(self.bbar, dtype=np.float64)
        object.__setattr__(self, "abar", abar)
        object.__setattr__(self, "bbar", bbar)
        for name, arr in (("abar", abar), ("bbar", bbar)):
            if arr.ndim != 2 or arr.shape[0] != 2:
                raise ValueError(f"{name} must have shape (2, n_states)")
            if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > 1.0 + 1e-15):
                raise ValueError(f"{name} entries must be finite and in [-1, 1]")
        if abar.shape != bbar.shape:
            raise ValueError("abar and bbar must have matching shapes")

    @property
    def n_states(self) -> int:
        return self.abar.shape[1]


@dataclass(frozen=True)
class ConditionalDistribution:
    """One distribution over states per setting pair, rows ordered as
    (a1b1, a1b2, a2b1, a2b2)."""

    p: np.ndarray
    norm_tol: float = NORM_TOL

    def __post_init__(self):
        p = np.asarray(self.p, dtype=np.float64)
        object.__setattr__(self, "p", p)
        if p.ndim != 2 or p.shape[0] != 4:
            raise ValueError("p must have shape (4, n_states)")
        self.validate()

    def validate(self):
        if np.any(self.p < 0.0):
            raise ValueError("distribution entries must be nonnegative")
        sums = self.p.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > self.norm_tol):
            raise ValueError(f"distributions must sum to 1 within {self.norm_tol}: {sums}")

    @property
    def n_states(self) -> int:
        return self.p.shape[1]


@dataclass(frozen=True)
class HiddenVariableModel:
    states: tuple[HiddenState, ...]
    responses: ResponseTable
    dist: ConditionalDistribution

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        n = len(self.states)
        ids = [s.id for s in self.states]
        if len(set(ids)) != n:
            raise ValueError("state ids must be unique")
        if self.responses.n_states != n or self.dist.n_states != n:
            raise ValueError("states, responses and dist sizes are inconsistent")

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state_pos(self, state: HiddenState) -> int:
        for k, s in enumerate(self.states):
            if s.id == state.id:
                return k
        raise IndexError(f"state id {state.id} not in model")


@dataclass(frozen=True)
class CorrelationTable:
    """Expectation values E(a_i, b_j) for the 2x2 setting grid, stored as
    e[i-1, j-1]."""

    e: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=np.float64)
        object.__setattr__(self, "e", e)
        if e.shape != (2, 2):
            raise ValueError("correlation table must be 2x2")
        if not np.all(np.isfinite(e)):
            raise ValueError("correlation table has non-finite entries")
        if np.any(np.abs(e) > 1.0 + 1e-12):
            raise ValueError("correlations must lie in [-1, 1]")

    def as_pair_vector(self) -> np.ndarray:
        """Entries in pair order (a1b1, a1b2, a2b1, a2b2)."""
        return np.array([self.e[0, 0], self.e[0, 1], self.e[1, 0], self.e[1, 1]])


def pair_index(a: Setting, b: Setting) -> int:
    if a.side != "A":
        raise ValueError(f"first setting must be A-side, got {a.side}")
    if b.side != "B":
        raise ValueError(f"second setting must be B-side, got {b.side}")
    return _PAIR_INDEX[(a.key, b.key)]


def expectation_given_state(model: HiddenVariableModel, a: Setting, b: Setting,
                            state: HiddenState) -> float:
    """Product expectation Abar(a, state) * Bbar(b, state) for one state."""
    pair_index(a, b)  # side validation
    k = model.state_pos(state)
    return float(model.responses.abar[a.index - 1, k] * model.responses.bbar[b.index - 1, k])


def expectation(model: HiddenVariableModel, a: Setting, b: Setting) -> float:
    """Weighted expectation sum_s Abar(a,s) Bbar(b,s) P(s | a, b)."""
    model.dist.validate()
    idx = pair_index(a, b)
    prod = model.responses.abar[a.index - 1] * model.responses.bbar[b.index - 1]
    return float(prod @ model.dist.p[idx])


def correlation_table(model: HiddenVariableModel) -> CorrelationTable:
    e = np.empty((2, 2))
    for i, j in itertools.product((1, 2), (1, 2)):
        e[i - 1, j - 1] = expectation(model, Setting("A", i), Setting("B", j))
    return CorrelationTable(e)


def chsh(model: HiddenVariableModel) -> float:
    """CHSH functional |E(a1,b1) - E(a1,b2)| + |E(a2,b2) + E(a2,b1)|."""
    return chsh_from_table(correlation_table(model))


def chsh_from_table(table: CorrelationTable) -> float:
    e = table.e
    return float(abs(e[0, 0] - e[0, 1]) + abs(e[1, 1] + e[1, 0]))


def is_si(model: HiddenVariableModel, tol: float = SI_TOL) -> tuple[bool, float]:
    """Whether the conditional distribution is the same for all setting pairs.

    Returns (flag, d) with d the largest entrywise gap between any two
    pair-conditioned distributions.
    """
    p = model.dist.p
    d = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            d = max(d, float(np.max(np.abs(p[i] - p[j]))))
    return d <= tol, d


def enumerate_deterministic_models() -> list[HiddenState]:
    """The 16 deterministic strategies (A(a1), A(a2), B(b1), B(b2)), each +-1."""
    states = []
    for k, combo in enumerate(itertools.product((-1, 1), repeat=4)):
        states.append(HiddenState(id=k, strategy=combo))
    return states


def deterministic_response_table(states: list[HiddenState]) -> ResponseTable:
    abar = np.array([[s.strategy[0] for s in states], [s.strategy[1] for s in states]],
                    dtype=np.float64)
    bbar = np.array([[s.strategy[2] for s in states], [s.strategy[3] for s in states]],
                    dtype=np.float64)
    return ResponseTable(abar, bbar)


def model_from_distributions(states: list[HiddenState], responses: ResponseTable,
                             p: np.ndarray) -> HiddenVariableModel:
    """Assemble a model from explicit per-pair distributions (4, n_states)."""
    return HiddenVariableModel(tuple(states), responses, ConditionalDistribution(np.asarray(p)))


def si_model(states: list[HiddenState], responses: ResponseTable,
             weights: np.ndarray) -> HiddenVariableModel:
    """Model whose four conditional distributions all equal ``weights``."""
    w = np.asarray(weights, dtype=np.float64)
    return model_from_distributions(states, responses, np.tile(w, (4, 1)))


def uniform_deterministic_model() -> HiddenVariableModel:
    states = enumerate_deterministic_models()
    table = deterministic_response_table(states)
    return si_model(states, table, np.full(16, 1.0 / 16.0))


# Quantum oracle: explicit matrix algebra for the two-particle singlet.

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_ID2 = np.eye(2, dtype=complex)

# x-basis eigenvectors in the z-basis.
_PLUS_X = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
_MINUS_X = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)

# (|+x>|-x> - |-x>|+x>) / sqrt(2): antisymmetric in any basis.
SINGLET = (np.kron(_PLUS_X, _MINUS_X) - np.kron(_MINUS_X, _PLUS_X)) / np.sqrt(2.0)


def spin_direction_operator(angle: float) -> np.ndarray:
    """Spin component along (sin t, 0, cos t) in the x-z plane, as a 2x2 matrix."""
    return np.sin(angle) * _SX + np.cos(angle) * _SZ


def singlet_correlation(angle_a: float, angle_b: float) -> float:
    """<psi| (n_a . sigma) (x) (n_b . sigma) |psi> for the singlet state.

    Computed by explicit 4x4 algebra; equals -cos(angle_a - angle_b).
    """
    if not (np.isfinite(angle_a) and np.isfinite(angle_b)):
        raise ValueError("angles must be finite")
    op = np.kron(spin_direction_operator(angle_a), spin_direction_operator(angle_b))
    val = np.vdot(SINGLET, op @ SINGLET)
    return float(val.real)


def singlet_table(a1: float, a2: float, b1: float, b2: float) -> CorrelationTable:
    """Correlation table of the singlet at the four given measurement angles."""
    e = np.array([
        [singlet_correlation(a1, b1), singlet_correlation(a1, b2)],
        [singlet_correlation(a2, b1), singlet_correlation(a2, b2)],
    ])
    return CorrelationTable(e)


# JSON serialization (schema shared with the command line tools).

def model_to_json(model: HiddenVariableModel) -> str:
    doc = {
        "states": [
            {"id": s.id, "strategy": list(s.strategy) if s.strategy else None}
            for s in model.states
        ],
        "abar": model.responses.abar.tolist(),
        "bbar": model.responses.bbar.tolist(),
        "dist": {key: model.dist.p[k].tolist() for k, key in enumerate(PAIR_KEYS)},
    }
    return json.dumps(doc, sort_keys=True)


def model_from_json(text: str) -> HiddenVariableModel:
    doc = json.loads(text)
    states = tuple(
        HiddenState(id=int(s["id"]),
                    strategy=tuple(s["strategy"]) if s.get("strategy") else None)
        for s in doc["states"]
    )
    responses = ResponseTable(np.array(doc["abar"]), np.array(doc["bbar"]))
    p = np.array([doc["dist"][key] for key in PAIR_KEYS])
    return HiddenVariableModel(states, responses, ConditionalDistribution(p))
