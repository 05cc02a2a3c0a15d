"""Command line front end.

beamsel run     --config exp.ini --schemes mm1,ia,aco --trials 200 --out r.csv
beamsel figure  a --trials 1000 --seed 1 --out figure_a.csv
beamsel validate

Exit codes: 0 success, 2 bad config or arguments, 3 enumeration budget
exceeded for a requested scheme (partial CSV is still written).
"""

import argparse
import sys

from .aco import AcoParams
from .channel import ScenarioConfig
from .configfile import load_config
from .exceptions import ConfigError
from .harness import (SCHEMES, ExperimentSpec, figure_preset,
                      infeasible_points, run_experiment, write_aco_log,
                      write_csv)
from .validate import print_report, run_invariant_suite


def _parse_schemes(text):
    names = tuple(s.strip().lower() for s in text.split(",") if s.strip())
    if not names:
        raise ConfigError("no schemes given")
    for n in names:
        if n not in SCHEMES:
            raise ConfigError(
                f"unknown scheme {n!r}; expected one of {', '.join(SCHEMES)}")
    return names


def _add_common(parser, default_out):
    parser.add_argument("--trials", type=int, default=1000,
                        help="Monte Carlo trials per sweep point")
    parser.add_argument("--seed", type=int, default=1,
                        help="master seed (64-bit unsigned)")
    parser.add_argument("--out", default=default_out,
                        help="output CSV path")
    parser.add_argument("--timing", action="store_true",
                        help="record wall time per selection; off by "
                             "default so equal seeds give identical files")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker threads for trial execution")
    parser.add_argument("--aco-log", metavar="PATH", default=None,
                        help="also write a per-visit colony convergence log")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="beamsel",
        description="Beam selection experiments for beamspace multi-user "
                    "MIMO downlinks")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a config")
    run_p.add_argument("--config", default=None,
                       help="INI experiment description; defaults apply "
                            "when omitted")
    run_p.add_argument("--schemes", default="mm1,ia,aco,exhaustive",
                       help="comma-separated selection schemes")
    _add_common(run_p, "results.csv")

    fig_p = sub.add_parser("figure", help="run a canned comparison")
    fig_p.add_argument("name", choices=("a", "b", "c"))
    _add_common(fig_p, None)

    sub.add_parser("validate", help="run the invariant suite")
    return parser


def _execute(spec, args):
    skipped = infeasible_points(spec)
    if skipped:
        per_scheme = sorted({s for s, _ in skipped})
        for scheme in per_scheme:
            pts = [spec.sweep[i] for s, i in skipped if s == scheme]
            desc = ", ".join(f"{n}={v:g}" for n, v in pts)
            print(f"warning: {scheme} exceeds the enumeration budget at "
                  f"{desc}; those rows are omitted", file=sys.stderr)
    rows = list(run_experiment(spec, workers=args.workers))
    write_csv(rows, args.out, timing=args.timing)
    print(f"wrote {len(rows)} rows to {args.out}")
    if args.aco_log and "aco" in spec.schemes:
        write_aco_log(spec, args.aco_log)
        print(f"wrote colony log to {args.aco_log}")
    return 3 if skipped else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return 0 if print_report(run_invariant_suite()) else 1
    try:
        if args.command == "figure":
            spec = figure_preset(args.name, n_trials=args.trials,
                                 master_seed=args.seed)
            if args.out is None:
                args.out = f"figure_{args.name}.csv"
        else:
            if args.config is not None:
                scenario, aco, sweep = load_config(args.config)
            else:
                scenario, aco = ScenarioConfig(), AcoParams()
                sweep = (("transmit_power_db", scenario.transmit_power_db),)
            spec = ExperimentSpec(scenario=scenario, aco=aco,
                                  schemes=_parse_schemes(args.schemes),
                                  sweep=sweep, n_trials=args.trials,
                                  master_seed=args.seed)
        return _execute(spec, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
