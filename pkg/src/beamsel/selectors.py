"""Baseline beam selectors: magnitude-only, interference-aware, exhaustive.

Each selector returns a SelectionOutcome carrying the chosen beams, the
trace metric and sum rate under the shared regularization policy, and an
exact count of Gram-inverse evaluations performed while selecting.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import BudgetExceededError
from .precoding import DEFAULT_RIDGE, as_matrix, evaluate_beams, has_duplicates

DEFAULT_BUDGET = 10_000_000


@dataclass
class SelectionOutcome:
    """Result of one selection run on one channel realization."""

    beams: np.ndarray
    trace_metric: float
    sum_rate: float
    inversion_count: int
    scheme: str
    regularized: bool = False
    duplicate: bool = False
    n_interference_users: int = 0
    history: list | None = None


def _finish(scheme, hbar, beams, rho, sigma2, inversions, ridge,
            duplicate=None, kbar=0, history=None):
    report = evaluate_beams(hbar, beams, rho, sigma2, ridge=ridge)
    return SelectionOutcome(
        beams=np.asarray(beams, dtype=np.int64),
        trace_metric=report.trace_metric,
        sum_rate=report.sum_rate,
        inversion_count=inversions,
        scheme=scheme,
        regularized=report.regularized,
        duplicate=has_duplicates(beams) if duplicate is None else duplicate,
        n_interference_users=kbar,
        history=history,
    )


def mm1_beams(hbar):
    """Strongest beam per user, ties to the lowest index. Collisions are
    kept: two users may well share a beam."""
    return np.argmax(np.abs(as_matrix(hbar)), axis=0).astype(np.int64)


def select_mm1(hbar, rho, sigma2, ridge=DEFAULT_RIDGE):
    """Magnitude-only selection; performs no matrix inversions."""
    beams = mm1_beams(hbar)
    return _finish("mm1", hbar, beams, rho, sigma2, 0, ridge)


def interference_users(beams):
    """Users whose strongest beam is shared with at least one other user,
    in ascending user order."""
    beams = np.asarray(beams)
    _, inverse, counts = np.unique(beams, return_inverse=True,
                                   return_counts=True)
    return np.flatnonzero(counts[inverse] > 1)


def ia_beams(hbar, ridge=DEFAULT_RIDGE):
    """Greedy reselection for colliding users.

    Non-colliding users keep their strongest beams. Colliding users are
    revisited in ascending index order; each one scans every unclaimed
    beam and takes the minimizer of the regularized trace metric of the
    rows assigned so far plus the candidate. One Gram inversion is counted
    per scanned candidate.

    Returns (beams, inversion_count, n_interference_users).
    """
    m = as_matrix(hbar)
    n = m.shape[0]
    beams = mm1_beams(m)
    ius = interference_users(beams)
    if ius.size == 0:
        return beams, 0, 0
    iu_set = set(ius.tolist())
    claimed = [False] * n
    for u in range(beams.size):
        if u not in iu_set:
            claimed[beams[u]] = True
    assigned_rows = [m[beams[u]] for u in range(beams.size) if u not in iu_set]
    inversions = 0
    for u in ius:
        cands = np.array([b for b in range(n) if not claimed[b]],
                         dtype=np.int64)
        base = np.array(assigned_rows, dtype=np.complex128).reshape(-1, m.shape[1])
        scores = kernels.border_scores(base, m[cands], ridge)
        pick = cands[int(np.argmin(scores))]
        beams[u] = pick
        claimed[pick] = True
        assigned_rows.append(m[pick])
        inversions += cands.size
    return beams, inversions, int(ius.size)


def select_ia(hbar, rho, sigma2, ridge=DEFAULT_RIDGE):
    """Interference-aware selection."""
    beams, inversions, kbar = ia_beams(hbar, ridge)
    return _finish("ia", hbar, beams, rho, sigma2, inversions, ridge,
                   kbar=kbar)


def exhaustive_beams(hbar, budget=DEFAULT_BUDGET):
    """Global minimizer of the exact trace metric over all K-of-N beam
    combinations, lexicographically smallest on ties.

    Returns (beams_ascending, trace, n_evaluated). Raises
    BudgetExceededError when C(N, K) exceeds the budget.
    """
    m = as_matrix(hbar)
    n, k = m.shape
    total = math.comb(n, k)
    if total > budget:
        raise BudgetExceededError(
            f"C({n},{k}) = {total} exceeds the evaluation budget {budget}"
        )
    beams, trace = kernels.exhaustive_search(m, k)
    return np.asarray(beams, dtype=np.int64), trace, total


def select_exhaustive(hbar, rho, sigma2, budget=DEFAULT_BUDGET,
                      ridge=DEFAULT_RIDGE):
    """Exhaustive-search oracle; counts one inversion per combination."""
    beams, _, total = exhaustive_beams(hbar, budget)
    return _finish("exhaustive", hbar, beams, rho, sigma2, total, ridge)
