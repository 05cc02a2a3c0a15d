"""End-to-end acceptance runs for the headline performance claims.

Every test here drives the public API or CLI at full experiment scale and
prints one line with the measured quantity next to its threshold. The
user-count ordering checks at 28 and 32 users are known to fail: at those
loads the candidate-restricted colony search genuinely drops below the
full-grid reassignment baseline (see the assertion messages for the
measured gaps). All other checks pass deterministically under the pinned
seeds.
"""

import dataclasses
import filecmp
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from beamsel.aco import AcoParams
from beamsel.channel import ScenarioConfig
from beamsel.harness import (ExperimentSpec, aggregate, cell_stats,
                             figure_preset, run_experiment, trial_channel)
from beamsel.selectors import interference_users, mm1_beams
from beamsel.validate import run_invariant_suite

RHO_POINTS = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
USER_POINTS = [4.0, 8.0, 12.0, 16.0, 20.0, 24.0, 28.0, 32.0]
BUDGET_POINTS = [1.0, 2.0, 4.0, 6.0, 8.0, 10.0]


@pytest.fixture(scope="session")
def oracle_gap_cells():
    spec = ExperimentSpec(
        scenario=ScenarioConfig(n_antennas=32, n_users=5,
                                transmit_power_db=20.0),
        aco=AcoParams(),
        schemes=("exhaustive", "aco"),
        sweep=(("transmit_power_db", 20.0),),
        n_trials=600,
        master_seed=1,
    )
    return aggregate(run_experiment(spec))


@pytest.fixture(scope="session")
def power_sweep_cells():
    spec = figure_preset("a", n_trials=4000, master_seed=1)
    spec = dataclasses.replace(spec, schemes=("mm1", "ia", "aco"))
    return aggregate(run_experiment(spec))


@pytest.fixture(scope="session")
def user_sweep_run():
    spec = figure_preset("b", n_trials=4000, master_seed=1)
    rows = list(run_experiment(spec))
    return spec, rows, aggregate(rows)


@pytest.fixture(scope="session")
def budget_sweep_run():
    spec = figure_preset("c", n_trials=600, master_seed=1)
    rows = list(run_experiment(spec))
    return spec, rows, aggregate(rows)


@pytest.fixture(scope="session")
def minimal_budget_run():
    spec = ExperimentSpec(
        scenario=ScenarioConfig(n_antennas=100, n_users=16,
                                transmit_power_db=20.0),
        aco=AcoParams(n_candidates=2, n_iterations=1),
        schemes=("aco",),
        sweep=(("transmit_power_db", 20.0),),
        n_trials=600,
        master_seed=1,
    )
    rows = list(run_experiment(spec))
    return spec, rows, aggregate(rows)


def test_criterion_1_colony_tracks_exhaustive_oracle(oracle_gap_cells):
    exh = cell_stats(oracle_gap_cells, "exhaustive", "transmit_power_db",
                     20.0)
    aco = cell_stats(oracle_gap_cells, "aco", "transmit_power_db", 20.0)
    ratio = aco.mean_sum_rate / exh.mean_sum_rate
    print(f"criterion 1: colony/exhaustive mean sum rate = {ratio:.4f} "
          f"over {aco.n_trials} trials (threshold >= 0.95)")
    assert aco.n_trials >= 500
    assert ratio >= 0.95, (
        f"colony mean {aco.mean_sum_rate:.3f} fell below 95% of the "
        f"exhaustive mean {exh.mean_sum_rate:.3f} (ratio {ratio:.4f})")


def _ordering_line(cells, sweep_name, value):
    aco = cell_stats(cells, "aco", sweep_name, value)
    ia = cell_stats(cells, "ia", sweep_name, value)
    mm1 = cell_stats(cells, "mm1", sweep_name, value)
    gap_ai = (aco.mean_sum_rate - aco.ci95) - (ia.mean_sum_rate + ia.ci95)
    gap_im = (ia.mean_sum_rate - ia.ci95) - (mm1.mean_sum_rate + mm1.ci95)
    return aco, ia, mm1, gap_ai, gap_im


@pytest.mark.parametrize("rho", RHO_POINTS)
def test_criterion_2_ordering_across_power(power_sweep_cells, rho):
    aco, ia, mm1, gap_ai, gap_im = _ordering_line(
        power_sweep_cells, "transmit_power_db", rho)
    verdict = "PASS" if (gap_ai > 0 and gap_im > 0) else "FAIL"
    print(f"criterion 2 (power {rho:g} dB): aco "
          f"{aco.mean_sum_rate:.3f}+-{aco.ci95:.3f} > ia "
          f"{ia.mean_sum_rate:.3f}+-{ia.ci95:.3f} > mm1 "
          f"{mm1.mean_sum_rate:.3f}+-{mm1.ci95:.3f}: {verdict}")
    assert aco.n_trials >= 500
    assert gap_ai > 0, (
        f"at {rho:g} dB the colony CI [{aco.mean_sum_rate - aco.ci95:.3f}, "
        f"...] overlaps the reassignment CI [..., "
        f"{ia.mean_sum_rate + ia.ci95:.3f}]")
    assert gap_im > 0, (
        f"at {rho:g} dB the reassignment CI overlaps the magnitude "
        f"baseline CI (gap {gap_im:.3f})")


@pytest.mark.parametrize("k", USER_POINTS)
def test_criterion_2_ordering_across_user_count(user_sweep_run, k):
    _, _, cells = user_sweep_run
    aco, ia, mm1, gap_ai, gap_im = _ordering_line(cells, "n_users", k)
    verdict = "PASS" if (gap_ai > 0 and gap_im > 0) else "FAIL"
    print(f"criterion 2 ({k:g} users): aco "
          f"{aco.mean_sum_rate:.3f}+-{aco.ci95:.3f} > ia "
          f"{ia.mean_sum_rate:.3f}+-{ia.ci95:.3f} > mm1 "
          f"{mm1.mean_sum_rate:.3f}+-{mm1.ci95:.3f}: {verdict}")
    assert aco.n_trials >= 500
    assert gap_im > 0, (
        f"at {k:g} users the reassignment CI overlaps the magnitude "
        f"baseline CI (gap {gap_im:.3f})")
    assert gap_ai > 0, (
        f"at {k:g} users the colony does not separate above reassignment: "
        f"colony {aco.mean_sum_rate:.3f}+-{aco.ci95:.3f} vs reassignment "
        f"{ia.mean_sum_rate:.3f}+-{ia.ci95:.3f} (CI gap {gap_ai:.3f}); "
        "with ten candidate beams per user the colony cannot reach the "
        "spread-out assignments the full-grid reassignment finds at this "
        "load, so the ordering genuinely inverts")


def test_criterion_3_candidate_budget_ratio(budget_sweep_run):
    _, _, cells = budget_sweep_run
    b2 = cell_stats(cells, "aco", "b_k", 2.0)
    b10 = cell_stats(cells, "aco", "b_k", 10.0)
    ratio = b2.mean_sum_rate / b10.mean_sum_rate
    print(f"criterion 3: two-candidate/ten-candidate mean sum rate = "
          f"{ratio:.4f} over {b2.n_trials} trials (threshold >= 0.85)")
    assert b2.n_trials >= 500
    assert ratio >= 0.85


def test_criterion_3_iteration_budget_ratio(budget_sweep_run):
    _, _, cells = budget_sweep_run
    t1 = cell_stats(cells, "aco", "t_max", 1.0)
    t10 = cell_stats(cells, "aco", "t_max", 10.0)
    ratio = t1.mean_sum_rate / t10.mean_sum_rate
    print(f"criterion 3: one-iteration/ten-iteration mean sum rate = "
          f"{ratio:.4f} over {t1.n_trials} trials (threshold >= 0.92)")
    assert t1.n_trials >= 500
    assert ratio >= 0.92


def test_criterion_3_minimal_budget_absolute_rate(minimal_budget_run):
    _, _, cells = minimal_budget_run
    cell = cell_stats(cells, "aco", "transmit_power_db", 20.0)
    print(f"criterion 3: two candidates, one iteration -> "
          f"{cell.mean_sum_rate:.2f} +- {cell.ci95:.2f} bits/s/Hz over "
          f"{cell.n_trials} trials (window [27, 37])")
    assert cell.n_trials >= 500
    assert 27.0 <= cell.mean_sum_rate <= 37.0


def test_criterion_4_inversion_counts(user_sweep_run, minimal_budget_run):
    spec, rows, _ = user_sweep_run
    assert all(r.inversion_count == 0 for r in rows if r.scheme == "mm1")
    # colony count is iterations x total candidate budget at every point
    for r in rows:
        if r.scheme == "aco":
            assert r.inversion_count == 10 * 10 * int(r.sweep_value)
    # reassignment count replayed from the exact collision pattern
    checked = 0
    for point_index, (name, value) in enumerate(spec.sweep):
        k = int(value)
        expected_by_trial = {}
        for trial in range(40):
            _, ch = trial_channel(spec, trial, stream=point_index + 1)
            kbar = interference_users(mm1_beams(ch.h_bar)).size
            expected_by_trial[trial] = (
                (100 - k) * kbar + (kbar * kbar + kbar) // 2)
        for r in rows:
            if (r.scheme == "ia" and r.sweep_value == value
                    and r.trial_index < 40):
                assert r.inversion_count == expected_by_trial[r.trial_index]
                checked += 1
    assert checked == 40 * len(spec.sweep)

    corner_spec, corner_rows, _ = minimal_budget_run
    assert all(r.inversion_count == 2 * 16 * 1 for r in corner_rows)
    # the minimal colony budget undercuts reassignment whenever collisions
    # exist (84*kbar + kbar(kbar+1)/2 > 32 for kbar >= 1)
    collision_trials = 0
    for trial in range(100):
        _, ch = trial_channel(corner_spec, trial)
        kbar = interference_users(mm1_beams(ch.h_bar)).size
        if kbar >= 1:
            collision_trials += 1
            ia_count = (100 - 16) * kbar + (kbar * kbar + kbar) // 2
            assert 32 < ia_count
    assert collision_trials > 0
    print(f"criterion 4: magnitude baseline 0 inversions, reassignment "
          f"formula replayed on {checked} rows, colony exactly "
          f"iterations*candidates*users everywhere, minimal budget 32 < "
          f"reassignment count on all {collision_trials}/100 colliding "
          "trials")


def test_criterion_5_invariant_suite():
    results = run_invariant_suite()
    for check in results:
        print(f"criterion 5: {check.describe()}")
    assert all(c.passed for c in results), [
        c.name for c in results if not c.passed]


def test_criterion_6_repeatable_figure_csv(tmp_path):
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    for path in (first, second):
        proc = subprocess.run(
            [sys.executable, "-m", "beamsel.cli", "figure", "a",
             "--seed", "7", "--trials", "50", "--out", str(path)],
            capture_output=True, text=True, env=dict(os.environ),
        )
        assert proc.returncode == 0, proc.stderr
    identical = filecmp.cmp(first, second, shallow=False)
    print(f"criterion 6: two 50-trial seed-7 figure runs byte-identical: "
          f"{identical}")
    assert identical
    assert first.read_bytes().count(b"\n") == 1 + 50 * 4 * 7
