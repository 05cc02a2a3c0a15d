"""Throughput comparison of the numba and numpy kernel backends.

Times the four shared kernels on representative problem sizes plus one
full Monte Carlo trial per scenario preset. Run from the repository
root:

    python benchmarks/bench_kernels.py [--repeats 5]
"""

import argparse
import time

import numpy as np

from beamsel.aco import AcoParams
from beamsel.channel import ScenarioConfig, generate_channel
from beamsel.harness import ExperimentSpec, run_experiment
import beamsel.kernels.numpy_impl as np_impl

try:
    import beamsel.kernels.numba_impl as nb_impl
except ImportError:
    nb_impl = None


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def kernel_cases():
    rng = np.random.default_rng(0)

    small = generate_channel(ScenarioConfig(n_antennas=32, n_users=5),
                             rng).h_bar
    large = generate_channel(ScenarioConfig(n_antennas=100, n_users=16),
                             rng).h_bar

    def case_trace(impl):
        rows = large[:16, :]
        return lambda: impl.trace_inv_gram(rows, 1e-3)

    def case_exhaustive(impl):
        return lambda: impl.exhaustive_search(small, 5)

    def case_border(impl):
        assigned = large[:8, :]
        cands = large[20:60, :]
        return lambda: impl.border_scores(assigned, cands, 1e-3)

    def case_sweep(impl):
        n, k = large.shape
        mag = np.abs(large)
        cand_idx = np.zeros((k, 10), dtype=np.int64)
        for u in range(k):
            cand_idx[u] = np.argsort(-mag[:, u], kind="stable")[:10]
        counts = np.full(k, 10, dtype=np.int64)
        beams = np.array([int(np.argmax(mag[:, u])) for u in range(k)],
                         dtype=np.int64)

        def run():
            impl.aco_sweep(large, cand_idx, counts, beams.copy(),
                           np.ones((k, 10)), 0.8, 0.4, 0.3, 0.5, 1e-3,
                           2.0 * n * n, 10, False, np.zeros((10, k)))
        return run

    return [
        ("trace_inv_gram 16x16", case_trace),
        ("exhaustive_search C(32,5)", case_exhaustive),
        ("border_scores 8+40 cands", case_border),
        ("aco_sweep 100x16 T=10 B=10", case_sweep),
    ]


def preset_trial_cases():
    def runner(name):
        spec = ExperimentSpec(
            scenario=ScenarioConfig(n_antennas=100, n_users=16),
            aco=AcoParams(),
            schemes=("mm1", "ia", "aco"),
            sweep=(("transmit_power_db", 20.0),),
            n_trials=10,
            master_seed=1,
        )
        if name == "small":
            spec = ExperimentSpec(
                scenario=ScenarioConfig(n_antennas=32, n_users=5),
                aco=AcoParams(),
                schemes=("mm1", "ia", "exhaustive", "aco"),
                sweep=(("transmit_power_db", 20.0),),
                n_trials=10,
                master_seed=1,
            )
        return lambda: list(run_experiment(spec))
    return [
        ("10 trials, 32 beams, all schemes", runner("small")),
        ("10 trials, 100 beams, no oracle", runner("large")),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing repetitions, best-of is reported")
    args = parser.parse_args()

    impls = [("numpy", np_impl)]
    if nb_impl is not None:
        impls.append(("numba", nb_impl))
        # trigger JIT compilation outside the timed region
        for _, factory in kernel_cases():
            factory(nb_impl)()

    print(f"{'kernel':<30} " +
          " ".join(f"{name:>12}" for name, _ in impls) + "   speedup")
    for label, factory in kernel_cases():
        times = [time_call(factory(impl), args.repeats)
                 for _, impl in impls]
        cols = " ".join(f"{t * 1e3:>10.3f}ms" for t in times)
        speed = f"{times[0] / times[-1]:>8.1f}x" if len(times) > 1 else ""
        print(f"{label:<30} {cols} {speed}")

    print()
    print(f"{'end to end (active backend)':<30}")
    for label, fn in preset_trial_cases():
        fn()  # warm cache and JIT
        t = time_call(fn, max(2, args.repeats // 2))
        print(f"{label:<30} {t * 1e3:>10.1f}ms")


if __name__ == "__main__":
    main()
