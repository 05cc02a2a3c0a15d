"""Monte Carlo experiment driver, statistics and CSV output.

A sweep is a sequence of (parameter, value) points over one scenario. Per
trial one channel is drawn and shared by every scheme; it is also shared
across sweep points unless the swept parameter changes the channel itself
(the user count does, power and selector knobs do not). Seeds for each
(trial, channel group) are derived statelessly from the master seed, so
results are reproducible for any worker count or execution order.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .aco import AcoParams, run_colony, _resolve_duplicates
from .channel import ScenarioConfig, generate_channel
from .exceptions import ConfigError, EmptyCellError
from .precoding import evaluate_beams, has_duplicates
from .selectors import (DEFAULT_BUDGET, exhaustive_beams, ia_beams,
                        mm1_beams)

SCHEMES = ("mm1", "ia", "exhaustive", "aco")
SWEEP_NAMES = ("transmit_power_db", "n_users", "b_k", "t_max")

CSV_HEADER = ("trial,scheme,sweep_name,sweep_value,sum_rate,trace,"
              "inversions,time_ms,regularized_flag,duplicate_flag")

_CI95_Z = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class ExperimentSpec:
    """One complete experiment: scenario, algorithms, sweep, trial plan."""

    scenario: ScenarioConfig
    aco: AcoParams
    schemes: tuple
    sweep: tuple               # ((name, value), ...)
    n_trials: int = 1000
    master_seed: int = 1
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError(f"unknown scheme {s!r}")
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if not self.sweep:
            raise ConfigError("sweep must contain at least one point")
        for name, value in self.sweep:
            if name not in SWEEP_NAMES:
                raise ConfigError(f"unknown sweep parameter {name!r}")
            if name in ("n_users", "b_k", "t_max"):
                if int(value) != value or value < 1:
                    raise ConfigError(f"{name} sweep values must be "
                                      "positive integers")
            if name in ("n_users", "b_k"):
                if value > self.scenario.n_antennas:
                    raise ConfigError(f"{name}={value:g} exceeds "
                                      "n_antennas")
        if self.n_trials < 1:
            raise ConfigError("n_trials must be positive")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ConfigError("master_seed must fit in 64 bits")


@dataclass(frozen=True)
class TrialResult:
    """One CSV row: one scheme at one sweep point in one trial."""

    trial_index: int
    scheme: str
    sweep_name: str
    sweep_value: float
    sum_rate: float
    trace_metric: float
    inversion_count: int
    wall_time_ms: float
    regularized: bool
    duplicate: bool


@dataclass(frozen=True)
class AggregateCell:
    scheme: str
    sweep_name: str
    sweep_value: float
    mean_sum_rate: float
    ci95: float
    n_trials: int


_MASK64 = (1 << 64) - 1


def _mix64(x):
    """SplitMix64 finalizer: a bijective avalanche over 64-bit integers."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def derive_seed(master_seed, trial_index, stream=0):
    """Per-trial seed: master_seed XOR a mixed trial index.

    `stream` separates channel groups inside one trial (used when the swept
    parameter changes the channel, so each point needs its own draw).
    """
    return (master_seed ^ _mix64(((trial_index & _MASK64) << 16) | stream)) & _MASK64


def _channel_groups(sweep):
    """Group sweep points that can share one channel realization.

    Points sweeping n_users redraw the channel (the user count changes its
    dimensions); every other point shares group 0.
    """
    shared = [(i, p) for i, p in enumerate(sweep) if p[0] != "n_users"]
    groups = []
    if shared:
        groups.append((0, shared))
    for i, p in enumerate(sweep):
        if p[0] == "n_users":
            groups.append((i + 1, [(i, p)]))
    return groups


def trial_channel(spec, trial_index, stream=0):
    """Reconstruct the channel a given (trial, group) consumed.

    The sector origin is redrawn per trial so the user ring lands anywhere
    inside the front half-plane; the scenario's own sector_origin applies
    only outside the harness.
    """
    scenario = spec.scenario
    if stream > 0:
        name, value = spec.sweep[stream - 1]
        if name != "n_users":
            raise ConfigError(
                f"stream {stream} does not map to an n_users sweep point")
        scenario = replace(scenario, n_users=int(value))
    rng = np.random.default_rng(
        derive_seed(spec.master_seed, trial_index, stream))
    width = scenario.los_sector_width
    origin = rng.uniform(-math.pi / 2, math.pi / 2 - width)
    scenario = replace(scenario, sector_origin=origin)
    return scenario, generate_channel(scenario, rng)


def infeasible_points(spec):
    """(scheme, point_index) pairs that would blow the enumeration budget."""
    out = []
    if "exhaustive" not in spec.schemes:
        return out
    for i, (name, value) in enumerate(spec.sweep):
        k = int(value) if name == "n_users" else spec.scenario.n_users
        if math.comb(spec.scenario.n_antennas, k) > spec.budget:
            out.append(("exhaustive", i))
    return out


def _colony_rng(spec, trial_index, stream):
    """Roulette draws get their own stream so the channel draw is
    untouched; argmax selection never consumes randomness."""
    if spec.aco.selection != "roulette":
        return None
    return np.random.default_rng(
        derive_seed(spec.master_seed, trial_index, stream | (1 << 15)))


def _run_unit(spec, trial_index, stream, points, skip):
    """Run every scheme at every sweep point of one channel group."""
    scenario, channel = trial_channel(spec, trial_index, stream)
    sigma2 = scenario.noise_variance
    colony_rng = _colony_rng(spec, trial_index, stream)
    rows = []
    cache = {}
    for point_index, (name, value) in points:
        rho_db = value if name == "transmit_power_db" else scenario.transmit_power_db
        rho = sigma2 * 10.0 ** (rho_db / 10.0)
        aco_params = spec.aco
        if name == "b_k":
            aco_params = replace(aco_params, n_candidates=int(value))
        elif name == "t_max":
            aco_params = replace(aco_params, n_iterations=int(value))
        for scheme in spec.schemes:
            if (scheme, point_index) in skip:
                continue
            key = (scheme, aco_params) if scheme == "aco" else scheme
            if key not in cache:
                start = time.perf_counter()
                if scheme == "mm1":
                    beams, inversions, dup = mm1_beams(channel), 0, None
                elif scheme == "ia":
                    beams, inversions, _ = ia_beams(channel, spec.aco.ridge)
                    dup = None
                elif scheme == "exhaustive":
                    beams, _, inversions = exhaustive_beams(channel,
                                                            spec.budget)
                    dup = None
                else:
                    state = run_colony(channel, aco_params, rng=colony_rng)
                    beams, clashed = _resolve_duplicates(
                        state.best_set, state.candidates,
                        np.abs(channel.h_bar))
                    inversions = state.inversion_count
                    dup = clashed or has_duplicates(beams)
                elapsed = (time.perf_counter() - start) * 1e3
                cache[key] = (beams, inversions, dup, elapsed)
            beams, inversions, dup, elapsed = cache[key]
            report = evaluate_beams(channel, beams, rho, sigma2,
                                    ridge=spec.aco.ridge)
            rows.append(TrialResult(
                trial_index=trial_index,
                scheme=scheme,
                sweep_name=name,
                sweep_value=float(value),
                sum_rate=report.sum_rate,
                trace_metric=report.trace_metric,
                inversion_count=inversions,
                wall_time_ms=elapsed,
                regularized=report.regularized,
                duplicate=has_duplicates(beams) if dup is None else dup,
            ))
    return rows


def run_experiment(spec, workers=1):
    """Run the full experiment and yield TrialResult rows canonically
    sorted by (sweep_name, sweep_value, scheme, trial).

    Schemes whose enumeration budget is exceeded at a sweep point are
    skipped there without aborting the others; see infeasible_points.
    Results are independent of the worker count.
    """
    skip = set(infeasible_points(spec))
    groups = _channel_groups(spec.sweep)
    units = [(trial, stream, points)
             for trial in range(spec.n_trials)
             for stream, points in groups]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = pool.map(
                lambda u: _run_unit(spec, u[0], u[1], u[2], skip), units)
            rows = [r for chunk in chunks for r in chunk]
    else:
        rows = [r for u in units
                for r in _run_unit(spec, u[0], u[1], u[2], skip)]
    rows.sort(key=lambda r: (r.sweep_name, r.sweep_value, r.scheme,
                             r.trial_index))
    yield from rows


def aggregate(results):
    """Mean sum rate and 95% normal-approximation CI per cell.

    A cell is one (scheme, sweep point); every cell needs at least two
    trials. Returns AggregateCell rows in canonical order.
    """
    cells = {}
    for r in results:
        cells.setdefault((r.sweep_name, r.sweep_value, r.scheme),
                         []).append(r.sum_rate)
    if not cells:
        raise EmptyCellError("no results to aggregate")
    out = []
    for (name, value, scheme), rates in sorted(cells.items()):
        n = len(rates)
        if n < 2:
            raise EmptyCellError(
                f"cell ({scheme}, {name}={value}) has {n} trial(s); "
                "need at least 2")
        arr = np.asarray(rates)
        ci = _CI95_Z * arr.std(ddof=1) / math.sqrt(n)
        out.append(AggregateCell(scheme=scheme, sweep_name=name,
                                 sweep_value=value,
                                 mean_sum_rate=float(arr.mean()),
                                 ci95=float(ci), n_trials=n))
    return out


def cell_stats(cells, scheme, sweep_name, sweep_value):
    """Pick one AggregateCell; raises EmptyCellError when absent."""
    for c in cells:
        if (c.scheme == scheme and c.sweep_name == sweep_name
                and c.sweep_value == sweep_value):
            return c
    raise EmptyCellError(
        f"no aggregate cell for ({scheme}, {sweep_name}={sweep_value})")


def figure_preset(name, n_trials=1000, master_seed=1):
    """Canned experiment specs for the three headline comparisons.

    a: 32 beams, 5 users, power swept 0..30 dB, all four schemes.
    b: 100 beams, 20 dB, user count swept 4..32, exhaustive excluded
       (the enumeration budget rules it out).
    c: 100 beams, 16 users, 20 dB, dual sweep of the candidate count
       (n_iterations=10) and the iteration count (n_candidates=10).
    """
    if name == "a":
        scenario = ScenarioConfig(n_antennas=32, n_users=5,
                                  transmit_power_db=20.0)
        sweep = tuple(("transmit_power_db", float(v))
                      for v in range(0, 31, 5))
        return ExperimentSpec(scenario=scenario, aco=AcoParams(),
                              schemes=("mm1", "ia", "exhaustive", "aco"),
                              sweep=sweep, n_trials=n_trials,
                              master_seed=master_seed)
    if name == "b":
        scenario = ScenarioConfig(n_antennas=100, n_users=4,
                                  transmit_power_db=20.0)
        sweep = tuple(("n_users", float(v)) for v in range(4, 33, 4))
        return ExperimentSpec(scenario=scenario, aco=AcoParams(),
                              schemes=("mm1", "ia", "aco"),
                              sweep=sweep, n_trials=n_trials,
                              master_seed=master_seed)
    if name == "c":
        scenario = ScenarioConfig(n_antennas=100, n_users=16,
                                  transmit_power_db=20.0)
        grid = (1, 2, 4, 6, 8, 10)
        sweep = (tuple(("b_k", float(v)) for v in grid)
                 + tuple(("t_max", float(v)) for v in grid))
        return ExperimentSpec(scenario=scenario, aco=AcoParams(),
                              schemes=("mm1", "ia", "aco"),
                              sweep=sweep, n_trials=n_trials,
                              master_seed=master_seed)
    raise ConfigError(f"unknown figure preset {name!r}")


def _fmt(x):
    return format(float(x), ".17g")


def write_csv(rows, path, timing=False):
    """Write TrialResult rows to a schema-stable UTF-8 CSV.

    time_ms is zeroed unless timing is requested, keeping default output
    byte-identical across runs with equal seeds.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(",".join((
                str(r.trial_index),
                r.scheme,
                r.sweep_name,
                _fmt(r.sweep_value),
                _fmt(r.sum_rate),
                _fmt(r.trace_metric),
                str(r.inversion_count),
                _fmt(r.wall_time_ms) if timing else "0",
                str(int(r.regularized)),
                str(int(r.duplicate)),
            )) + "\n")


def write_aco_log(spec, path):
    """Per-visit convergence log of the colony selector, one CSV row per
    (trial, sweep point, visit)."""
    groups = _channel_groups(spec.sweep)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("trial,sweep_name,sweep_value,visit,iteration,user,beam,"
                 "utility,best_trace\n")
        for trial in range(spec.n_trials):
            for stream, points in groups:
                _, channel = trial_channel(spec, trial, stream)
                colony_rng = _colony_rng(spec, trial, stream)
                for _, (name, value) in points:
                    aco_params = spec.aco
                    if name == "b_k":
                        aco_params = replace(aco_params,
                                             n_candidates=int(value))
                    elif name == "t_max":
                        aco_params = replace(aco_params,
                                             n_iterations=int(value))
                    state = run_colony(channel, aco_params,
                                       rng=colony_rng,
                                       record_history=True)
                    for i, v in enumerate(state.history):
                        fh.write(f"{trial},{name},{_fmt(value)},{i},"
                                 f"{v.iteration},{v.user},{v.beam},"
                                 f"{_fmt(v.utility)},{_fmt(v.best_trace)}\n")
