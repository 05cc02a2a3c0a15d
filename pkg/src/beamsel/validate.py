"""Self-contained invariant suite, also exposed as `beamsel validate`.

Each check recomputes its expectation from first principles (unitarity,
norm preservation, power budgets, brute-force enumeration) so regressions
in the optimized paths cannot hide behind their own output.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import (ScenarioConfig, dla_transform, generate_channel,
                      grid_directions, steering_vector)
from .precoding import sum_rate, trace_objective, zf_precoder
from .selectors import exhaustive_beams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    limit: float

    def describe(self):
        status = "pass" if self.passed else "FAIL"
        return (f"{status}  {self.name}: worst {self.worst:.3e} "
                f"(limit {self.limit:.1e})")


def _check(name, worst, limit):
    return CheckResult(name=name, passed=bool(worst < limit),
                       worst=float(worst), limit=float(limit))


def check_transform_unitarity(sizes=(1, 2, 4, 8, 16, 32, 64, 100)):
    """U^H U must be the identity for every array size."""
    worst = 0.0
    for n in sizes:
        u = dla_transform(n)
        err = np.abs(u.conj().T @ u - np.eye(n)).max()
        worst = max(worst, err)
    return _check("beamspace transform unitarity", worst, 1e-10)


def check_steering_norm(sizes=(2, 3, 16, 33, 100), seed=0):
    """Steering vectors are unit norm for arbitrary directions."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in sizes:
        for d in rng.uniform(-0.5, 0.5, size=8):
            worst = max(worst, abs(np.linalg.norm(steering_vector(d, n)) - 1.0))
        grid = grid_directions(n)
        if np.any(np.diff(grid) <= 0):
            worst = math.inf
    return _check("steering vector norm and grid order", worst, 1e-10)


def check_parseval(seed=1, n_draws=20):
    """The beamspace map preserves per-user channel energy."""
    rng = np.random.default_rng(seed)
    cfg = ScenarioConfig(n_antennas=32, n_users=5)
    worst = 0.0
    for _ in range(n_draws):
        ch = generate_channel(cfg, rng)
        a = np.linalg.norm(ch.h_antenna, axis=0)
        b = np.linalg.norm(ch.h_bar, axis=0)
        worst = max(worst, float(np.max(np.abs(a - b) / a)))
    return _check("beamspace energy preservation", worst, 1e-10)


def check_zf_power(seed=2, n_draws=25):
    """The explicit precoder spends exactly the power budget and inverts
    the selected channel."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        k = int(rng.integers(2, 6))
        h_s = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
        rho = float(rng.uniform(0.5, 200.0))
        w = zf_precoder(h_s, rho)
        power = float(np.sum(np.abs(w) ** 2))
        worst = max(worst, abs(power - rho) / rho)
        report = sum_rate(h_s, rho, 1.0)
        eye_err = np.abs(h_s.conj().T @ w - report.alpha * np.eye(k)).max()
        worst = max(worst, float(eye_err) / report.alpha)
    return _check("zero-forcing power budget", worst, 1e-8)


def check_rate_trace_equivalence(seed=3, n_draws=100):
    """Over all subsets of small problems, max sum rate and min trace
    pick the same beams."""
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(n_draws):
        n = int(rng.integers(4, 9))
        k = int(rng.integers(1, 4))
        hbar = (rng.standard_normal((n, k))
                + 1j * rng.standard_normal((n, k)))
        rho = float(rng.uniform(1.0, 100.0))
        best_rate, by_rate = -math.inf, None
        best_trace, by_trace = math.inf, None
        for combo in itertools.combinations(range(n), k):
            rows = hbar[list(combo)]
            gram = rows.conj().T @ rows
            if np.linalg.cond(gram) > 1e10:
                continue
            trace = float(np.trace(np.linalg.inv(gram)).real)
            rate = k * math.log2(1.0 + rho / trace / k)
            if rate > best_rate:
                best_rate, by_rate = rate, combo
            if trace < best_trace:
                best_trace, by_trace = trace, combo
        if by_rate != by_trace:
            failures += 1
    return _check("sum-rate / trace-metric equivalence", failures, 1)


def check_exhaustive_oracle(seed=4, n_draws=50):
    """The optimized enumeration matches a direct itertools + inv scan."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        n = int(rng.integers(3, 7))
        k = int(rng.integers(1, min(n, 4) + 1))
        hbar = (rng.standard_normal((n, k))
                + 1j * rng.standard_normal((n, k)))
        beams, trace, _ = exhaustive_beams(hbar)
        ref_trace, ref_combo = math.inf, None
        for combo in itertools.combinations(range(n), k):
            rows = hbar[list(combo)]
            gram = rows.conj().T @ rows
            try:
                t = float(np.trace(np.linalg.inv(gram)).real)
            except np.linalg.LinAlgError:
                continue
            if t < ref_trace:
                ref_trace, ref_combo = t, combo
        if tuple(beams) != ref_combo:
            worst = math.inf
        else:
            worst = max(worst, abs(trace - ref_trace) / ref_trace)
    return _check("exhaustive search against direct scan", worst, 1e-8)


def check_trace_kernel(seed=5, n_draws=40):
    """Fast Gram-trace kernel against plain inv() on random stacks."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_draws):
        m = int(rng.integers(1, 7))
        k = int(rng.integers(1, m + 1))
        rows = (rng.standard_normal((m, k))
                + 1j * rng.standard_normal((m, k)))
        ridge = float(rng.choice([0.0, 1e-3, 1e-1]))
        gram = rows.conj().T @ rows + ridge * np.eye(k)
        if np.linalg.cond(gram) > 1e10:
            continue
        ref = float(np.trace(np.linalg.inv(gram)).real)
        got = kernels.trace_inv_gram(rows, ridge)
        worst = max(worst, abs(got - ref) / ref)
        direct = trace_objective(rows, np.arange(m), ridge=ridge)
        worst = max(worst, abs(direct - ref) / ref)
    return _check("trace kernel against plain inversion", worst, 1e-8)


ALL_CHECKS = (
    check_transform_unitarity,
    check_steering_norm,
    check_parseval,
    check_zf_power,
    check_rate_trace_equivalence,
    check_exhaustive_oracle,
    check_trace_kernel,
)


def run_invariant_suite():
    """Run every invariant check and return the CheckResult list."""
    return [check() for check in ALL_CHECKS]


def print_report(results, stream=None):
    """Human-readable pass/fail listing; returns True when all passed."""
    import sys
    stream = stream or sys.stdout
    ok = True
    for r in results:
        stream.write(r.describe() + "\n")
        ok = ok and r.passed
    stream.write(("all invariants hold" if ok
                  else "invariant violations detected") + "\n")
    return ok
