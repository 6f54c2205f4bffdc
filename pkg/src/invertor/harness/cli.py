"""Command-line entry point: ``invertor {run,compare,oracle-check,make-data,hist}``.

Exit codes: 0 success, 1 validation or configuration error, 2 particle
degeneracy. ``INVERTOR_LOG`` sets the log level (default ``WARNING``).
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from ..exceptions import ConfigurationError, DegeneracyError, DomainError
from ..simulators import (
    DiscreteOracle,
    LobeSimulator,
    default_well_locations,
    make_synthetic_dataset,
    write_oracle_data,
    write_well_logs,
)
from .config import parse_config
from .experiment import (
    compare_methods,
    oracle_check,
    read_summary,
    run_experiment,
    write_comparison,
    write_histogram,
)

log = logging.getLogger("invertor")


def _setup_logging():
    level = os.environ.get("INVERTOR_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def cmd_run(args):
    config = parse_config(args.config)
    summary = run_experiment(config)
    scores = summary.final_scores
    print(f"{config.label}: {len(scores)} runs written to {config.output_dir}")
    print(f"median final log-score {np.median(scores):.4f}, "
          f"wall clock {summary.wall_clock.sum():.2f}s")
    if args.check_oracle:
        return _report_oracle(oracle_check(config, summary))
    return 0


def _report_oracle(report):
    print(f"oracle check [{report['method']}]: {report['samples']} samples, "
          f"max site TV {report['max_site_tv']:.4f}, joint TV {report['joint_tv']:.4f} "
          f"(tolerance {report['tolerance']}) -> {'PASS' if report['passed'] else 'FAIL'}")
    return 0 if report["passed"] else 1


def cmd_oracle_check(args):
    config = parse_config(args.config)
    summary = run_experiment(config)
    report = oracle_check(config, summary)
    with open(Path(config.output_dir) / "oracle_check.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return _report_oracle(report)


def cmd_compare(args):
    configs = [parse_config(p) for p in args.configs]
    report = compare_methods(configs)
    print(report.table())
    if args.out:
        write_comparison(report, args.out)
    return 0


def cmd_make_data(args):
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    truth_path = Path(args.truth) if args.truth else out.with_suffix(".truth.json")
    if args.simulator == "oracle":
        sim = DiscreteOracle(horizon=args.lobes)
        rng = np.random.Generator(np.random.Philox(args.seed))
        truth = np.array([sim.sample_params(rng) for _ in range(sim.horizon)])
        observations = sim.init_hyper + np.cumsum(truth[:, 0] - 0.5)
        write_oracle_data(observations, out)
    else:
        sim = LobeSimulator(horizon=args.lobes, wells=default_well_locations(args.wells))
        logs, truth = make_synthetic_dataset(sim, args.seed)
        write_well_logs(logs, out)
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump({"seed": args.seed, "simulator": args.simulator, "params": truth.tolist()},
                  fh, indent=2)
        fh.write("\n")
    print(f"wrote {out} (ground truth held out in {truth_path})")
    return 0


def cmd_hist(args):
    summaries = [read_summary(p) for p in args.summaries]
    paths = write_histogram(summaries, args.bins, args.out)
    for p in paths:
        print(f"wrote {p}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="invertor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("config")
    p.add_argument("--check-oracle", action="store_true",
                   help="compare against exact enumeration (oracle simulator only)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run several configs and rank the methods")
    p.add_argument("configs", nargs="+")
    p.add_argument("--out", help="write the ranking table as CSV")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle-check", help="run an oracle config and check it against enumeration")
    p.add_argument("config")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("make-data", help="generate a synthetic dataset with held-out ground truth")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lobes", type=int, required=True, help="number of steps T")
    p.add_argument("--wells", type=int, default=7)
    p.add_argument("--out", required=True)
    p.add_argument("--simulator", choices=("lobe", "oracle"), default="lobe")
    p.add_argument("--truth", help="where to write the ground truth (default: <out>.truth.json)")
    p.set_defaults(func=cmd_make_data)

    p = sub.add_parser("hist", help="histogram final log-scores from summary.jsonl files")
    p.add_argument("summaries", nargs="+")
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_hist)
    return parser


def main(argv=None):
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegeneracyError as exc:
        print(f"degeneracy error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
