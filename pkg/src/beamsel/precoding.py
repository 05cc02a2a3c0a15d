"""Zero-forcing precoding, power scaling, user rates and the trace objective.

Under equal power allocation the ZF precoder for a selected beam subset
h_s is alpha * h_s (h_s^H h_s)^{-1}; the scaling alpha soaks the whole
power budget, so every per-user rate collapses to the same closed form
log2(1 + alpha^2 / (sigma^2 K)). Maximizing the sum rate over subsets is
therefore equivalent to minimizing tr((h_s^H h_s)^{-1}).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import SingularMatrixError

# ridge applied when a Gram matrix is not certifiably invertible, and the
# conditioning threshold that separates the two regimes
DEFAULT_RIDGE = 1e-3
COND_LIMIT = 1e12


@dataclass(frozen=True)
class RateReport:
    """Rates achieved by ZF on one selected beam set.

    regularized marks that trace_metric came from the ridge-stabilized Gram
    because the exact one was singular or ill-conditioned.
    """

    alpha: float
    per_user_rate: np.ndarray
    sum_rate: float
    trace_metric: float
    regularized: bool = False


def as_matrix(hbar):
    """Accept either a BeamspaceChannel or a raw beamspace matrix."""
    return np.asarray(getattr(hbar, "h_bar", hbar), dtype=np.complex128)


def has_duplicates(beams):
    beams = np.asarray(beams)
    return bool(len(np.unique(beams)) < beams.size)


def reduced_channel(hbar, beams):
    """Stack the selected beam rows: row j is row beams[j] of h_bar."""
    m = as_matrix(hbar)
    beams = np.asarray(beams, dtype=np.int64)
    if beams.size and (beams.min() < 0 or beams.max() >= m.shape[0]):
        raise IndexError(f"beam index out of range [0, {m.shape[0]})")
    return m[beams]


def zf_scaling(h_s, rho, ridge=0.0):
    """Power scaling alpha and trace metric for a selected channel.

    trace = tr((h_s^H h_s + ridge*I)^{-1}), alpha = sqrt(rho / trace).
    Raises SingularMatrixError when the (possibly regularized) Gram cannot
    be factorized.
    """
    if rho <= 0:
        raise ValueError("rho must be positive")
    if ridge < 0:
        raise ValueError("ridge must be nonnegative")
    m = as_matrix(h_s)
    if ridge == 0.0:
        # rounding can turn a rank-deficient Gram into a finite but
        # meaningless trace, so singularity is tested explicitly here
        gram = m.conj().T @ m
        if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) > 1e14:
            raise SingularMatrixError(
                "selected Gram matrix is singular; a positive ridge is required"
            )
    trace = kernels.trace_inv_gram(m, ridge)
    if not math.isfinite(trace) or trace <= 0:
        raise SingularMatrixError(
            "selected Gram matrix is singular; a positive ridge is required"
        )
    return math.sqrt(rho / trace), trace


def sum_rate(h_s, rho, sigma2, n_users=None, ridge=0.0):
    """Per-user and sum rates of ZF with equal power allocation.

    Every user gets log2(1 + alpha^2/(sigma2*K)) by construction.
    """
    h_s = as_matrix(h_s)
    k = h_s.shape[0] if n_users is None else int(n_users)
    alpha, trace = zf_scaling(h_s, rho, ridge)
    rate = math.log2(1.0 + alpha * alpha / (sigma2 * k))
    return RateReport(
        alpha=alpha,
        per_user_rate=np.full(k, rate),
        sum_rate=k * rate,
        trace_metric=trace,
        regularized=ridge > 0.0,
    )


def zf_precoder(h_s, rho, ridge=0.0):
    """Explicit precoding matrix alpha * h_s (h_s^H h_s + ridge*I)^{-1}.

    Exposed for the power-normalization check; rate computations use the
    closed form instead.
    """
    h_s = as_matrix(h_s)
    alpha, _ = zf_scaling(h_s, rho, ridge)
    gram = h_s.conj().T @ h_s + ridge * np.eye(h_s.shape[1])
    return alpha * h_s @ np.linalg.inv(gram)


def trace_objective(hbar, beams, ridge=0.0):
    """tr((h_s^H h_s + ridge*I)^{-1}) of the selected rows; lower is better."""
    rows = reduced_channel(hbar, beams)
    trace = kernels.trace_inv_gram(rows, ridge)
    if not math.isfinite(trace) or trace <= 0:
        raise SingularMatrixError(
            "selected Gram matrix is singular; a positive ridge is required"
        )
    return trace


def evaluate_beams(hbar, beams, rho, sigma2, ridge=DEFAULT_RIDGE,
                   cond_limit=COND_LIMIT):
    """Rate report for a final beam set under the regularization policy.

    Exact inversion when the selected Gram is certifiably well-conditioned
    (condition number below cond_limit); otherwise the ridge-stabilized
    Gram is used and the report is flagged. Duplicate beam rows always land
    in the regularized branch.
    """
    rows = reduced_channel(hbar, beams)
    gram = rows.conj().T @ rows
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.linalg.cond(gram)
    if np.isfinite(cond) and cond < cond_limit:
        return sum_rate(rows, rho, sigma2, ridge=0.0)
    return sum_rate(rows, rho, sigma2, ridge=ridge)
