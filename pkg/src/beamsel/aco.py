"""Colony-based beam selection.

Starting from the magnitude-only assignment, users are revisited for a
fixed number of iterations. On each visit every candidate beam of the user
is scored by the regularized trace metric of the working set with that
user's beam swapped in (the utility), mapped to a desirability in (0, 1],
and combined with a persistent per-(user, candidate) feedback weight into
a selection probability. The working set takes the most probable beam and
the best configuration ever accepted is returned.
"""

import math
from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import ConfigError
from .precoding import as_matrix, evaluate_beams, has_duplicates
from .selectors import SelectionOutcome, mm1_beams

VisitRecord = namedtuple("VisitRecord",
                         "iteration user beam utility best_trace")


@dataclass(frozen=True)
class AcoParams:
    """Tuning constants of the colony selector.

    pheromone_weight and desirability_weight are the exponents blending
    accumulated feedback with the per-visit utility; decay in (0,1) forgets
    old feedback; feedback_weight scales the reinforcement; ridge keeps
    every scored Gram invertible; n_candidates may be one count for all
    users or a per-user sequence. selection is "argmax" (deterministic,
    default) or "roulette" (sample from the probability vector; needs rng).
    """

    pheromone_weight: float = 0.8
    desirability_weight: float = 0.4
    decay: float = 0.3
    feedback_weight: float = 0.5
    ridge: float = 1e-3
    n_iterations: int = 10
    n_candidates: object = 10
    selection: str = "argmax"

    def __post_init__(self):
        if self.pheromone_weight < 0 or self.desirability_weight < 0:
            raise ConfigError("selection-probability weights must be >= 0")
        if not 0.0 < self.decay < 1.0:
            raise ConfigError("decay must lie strictly inside (0, 1)")
        if self.feedback_weight <= 0:
            raise ConfigError("feedback_weight must be positive")
        if self.ridge <= 0:
            raise ConfigError("ridge must be positive")
        if self.n_iterations < 1:
            raise ConfigError("n_iterations must be at least 1")
        if self.selection not in ("argmax", "roulette"):
            raise ConfigError("selection must be 'argmax' or 'roulette'")

    def candidate_counts(self, n_antennas, n_users):
        counts = np.broadcast_to(
            np.asarray(self.n_candidates, dtype=np.int64), (n_users,)
        ).copy()
        if counts.min() < 1 or counts.max() > n_antennas:
            raise ConfigError("candidate counts must lie in [1, n_antennas]")
        return counts


@dataclass
class AcoState:
    """Final state of one colony run."""

    candidates: list
    tau: np.ndarray
    working_set: np.ndarray
    best_set: np.ndarray
    best_trace: float
    inversion_count: int
    history: list | None = None


def build_candidates(hbar, n_candidates):
    """Per-user candidate lists: the n_candidates strongest beams in
    descending magnitude, ties to the lower index. Element 0 is always the
    magnitude-only beam."""
    m = as_matrix(hbar)
    n, k = m.shape
    counts = np.broadcast_to(np.asarray(n_candidates, dtype=np.int64),
                             (k,))
    if counts.min() < 1 or counts.max() > n:
        raise ConfigError("candidate counts must lie in [1, n_antennas]")
    mag = np.abs(m)
    out = []
    for u in range(k):
        order = np.argsort(-mag[:, u], kind="stable")
        out.append(order[: counts[u]].astype(np.int64))
    return out


def utility(hbar, working_set, user, beam, ridge):
    """Regularized trace metric of the working set with `user`'s beam
    replaced by `beam`. Reference implementation of the per-candidate
    score; the run loop computes the same value incrementally."""
    m = as_matrix(hbar)
    rows = m[np.asarray(working_set, dtype=np.int64)].copy()
    rows[user] = m[beam]
    return kernels.trace_inv_gram(rows, ridge)


def desirability(d, n_antennas):
    """Map a utility to (0, 1]: exp(-d / (2 n_antennas^2)), decreasing."""
    return np.exp(-np.asarray(d, dtype=np.float64)
                  / (2.0 * n_antennas * n_antennas))


def selection_probability(tau_row, eta_row, pheromone_weight,
                          desirability_weight):
    """Normalized tau^a * eta^q. A fully-underflowed weight vector is
    treated as uniform."""
    tau_row = np.asarray(tau_row, dtype=np.float64)
    eta_row = np.asarray(eta_row, dtype=np.float64)
    if tau_row.min() < 0 or eta_row.min() < 0:
        raise ValueError("tau and eta must be nonnegative")
    weights = tau_row ** pheromone_weight * eta_row ** desirability_weight
    total = weights.sum()
    if total <= 0.0:
        return np.full(weights.size, 1.0 / weights.size)
    return weights / total


def pheromone_update(tau_prev, eta, p, decay, feedback_weight):
    """Elementwise feedback update: (1-decay)*tau + feedback*eta*p."""
    return ((1.0 - decay) * np.asarray(tau_prev, dtype=np.float64)
            + feedback_weight * np.asarray(eta) * np.asarray(p))


def run_colony(hbar, params, rng=None, record_history=False):
    """Execute the full visit loop and return the final AcoState.

    Deterministic in argmax mode; roulette mode consumes one uniform draw
    per user visit from rng.
    """
    m = as_matrix(hbar)
    n, k = m.shape
    counts = params.candidate_counts(n, k)
    cand_lists = build_candidates(m, counts)
    bmax = int(counts.max())
    cand_idx = np.zeros((k, bmax), dtype=np.int64)
    for u in range(k):
        cand_idx[u, : counts[u]] = cand_lists[u]
    beams = mm1_beams(m)
    tau = np.ones((k, bmax), dtype=np.float64)
    t_max = params.n_iterations
    roulette = params.selection == "roulette"
    if roulette:
        if rng is None:
            raise ConfigError("roulette selection requires an rng")
        uniforms = rng.random((t_max, k))
    else:
        uniforms = np.zeros((t_max, k))
    best, best_trace, hist_beam, hist_d, hist_best = kernels.aco_sweep(
        m, cand_idx, counts, beams, tau,
        params.pheromone_weight, params.desirability_weight,
        params.decay, params.feedback_weight, params.ridge,
        2.0 * n * n, t_max, roulette, uniforms,
    )
    history = None
    if record_history:
        history = [
            VisitRecord(r // k, r % k, int(hist_beam[r]),
                        float(hist_d[r]), float(hist_best[r]))
            for r in range(t_max * k)
        ]
    return AcoState(
        candidates=cand_lists,
        tau=tau,
        working_set=beams,
        best_set=np.asarray(best, dtype=np.int64),
        best_trace=float(best_trace),
        inversion_count=int(t_max * counts.sum()),
        history=history,
    )


def _resolve_duplicates(best, cand_lists, mag):
    """Reassign any user holding an already-claimed beam to its next-best
    unclaimed candidate, falling back to the strongest unclaimed beam."""
    result = np.array(best, dtype=np.int64)
    taken = set()
    clashed = False
    for u in range(result.size):
        b = int(result[u])
        if b not in taken:
            taken.add(b)
            continue
        clashed = True
        pool = list(cand_lists[u]) + list(np.argsort(-mag[:, u],
                                                     kind="stable"))
        for c in pool:
            if int(c) not in taken:
                result[u] = int(c)
                taken.add(int(c))
                break
    return result, clashed


def select_aco(hbar, rho, sigma2, params=None, rng=None,
               record_history=False):
    """Colony selection with final rate evaluation.

    If the best configuration still carries duplicate beams they are
    resolved to each user's next-best unclaimed candidate and the outcome
    is flagged.
    """
    params = AcoParams() if params is None else params
    m = as_matrix(hbar)
    state = run_colony(m, params, rng=rng, record_history=record_history)
    beams, clashed = _resolve_duplicates(state.best_set,
                                         state.candidates, np.abs(m))
    report = evaluate_beams(m, beams, rho, sigma2, ridge=params.ridge)
    return SelectionOutcome(
        beams=beams,
        trace_metric=report.trace_metric,
        sum_rate=report.sum_rate,
        inversion_count=state.inversion_count,
        scheme="aco",
        regularized=report.regularized,
        duplicate=clashed or has_duplicates(beams),
        history=state.history,
    )
