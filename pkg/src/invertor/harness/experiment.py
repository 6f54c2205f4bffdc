"""Multi-run experiments, oracle checks, histograms and method comparison."""

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..exceptions import ConfigurationError
from ..inference import run_method
from ..simulators import (
    DiscreteOracle,
    LobeSimulator,
    empirical_tuple_distribution,
    oracle_enumerate,
    read_oracle_data,
    read_well_logs,
    site_marginals,
    total_variation,
)

__all__ = [
    "ChainRecord",
    "ComparisonReport",
    "RunSummary",
    "build_problem",
    "compare_methods",
    "emit_histogram_data",
    "oracle_check",
    "read_summary",
    "run_experiment",
    "write_comparison",
    "write_histogram",
]

log = logging.getLogger(__name__)

TV_TOLERANCE = 0.05

PLOT_SCRIPT = '''"""Plot log-score histograms written by `invertor hist`."""
import csv
import sys

import matplotlib.pyplot as plt

paths = sys.argv[1:] or {paths!r}
fig, ax = plt.subplots(figsize=(6, 4))
for path in paths:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    lows = [float(r["bin_low"]) for r in rows]
    widths = [float(r["bin_high"]) - float(r["bin_low"]) for r in rows]
    counts = [int(r["count"]) for r in rows]
    ax.bar(lows, counts, width=widths, align="edge", alpha=0.5, label=path)
ax.set_xlabel("final log-score")
ax.set_ylabel("runs")
ax.legend()
fig.tight_layout()
fig.savefig("histogram.png", dpi=150)
'''


@dataclass
class ChainRecord:
    """Per-run output, small enough to ship back from a worker process."""

    run: int
    seed: int
    final_logscore: float
    trajectory: np.ndarray
    acceptance_count: int
    proposals: int
    simulator_calls: int
    final_params: np.ndarray
    wall_clock: float
    param_samples: np.ndarray = None

    @property
    def acceptance_rate(self):
        return self.acceptance_count / self.proposals if self.proposals else float("nan")


@dataclass
class RunSummary:
    """All runs of one experiment, ordered by run index."""

    label: str
    method: str
    simulator: str
    gamma: float
    records: list = field(default_factory=list)

    @property
    def final_scores(self):
        return np.array([r.final_logscore for r in self.records])

    @property
    def wall_clock(self):
        return np.array([r.wall_clock for r in self.records])

    def calls_per_iteration(self):
        return np.array([r.simulator_calls / len(r.trajectory) for r in self.records])


def build_problem(config):
    """Instantiate the simulator and load the data a config points at."""
    if config.simulator == "oracle":
        data = read_oracle_data(config.data_path)
        sim = DiscreteOracle(horizon=config.horizon)
        sim.check_data(data)
        return sim, data
    data = read_well_logs(config.data_path)
    wells = config.wells if config.wells is not None else data.locations
    sim = LobeSimulator(
        horizon=config.horizon,
        wells=wells,
        grid_size=config.grid_size,
        terminal_penalty=config.terminal_penalty,
        length_normalized=config.length_normalized,
    )
    sim.check_data(data)
    return sim, data


def _complete(samples):
    if samples is None:
        return None
    keep = ~np.isnan(samples).any(axis=(1, 2))
    return samples[keep]


def _run_chain(config, run):
    sim, data = build_problem(config)
    seed = config.base_seed + run
    record = config.record_params or config.simulator == "oracle"
    start = time.perf_counter()
    result = run_method(config.method, sim, data, config.gamma, seed, record_params=record)
    elapsed = time.perf_counter() - start
    return ChainRecord(
        run=run,
        seed=seed,
        final_logscore=result.final_logscore,
        trajectory=np.asarray(result.logscore_trajectory),
        acceptance_count=int(result.acceptance_count),
        proposals=int(result.proposals),
        simulator_calls=int(result.simulator_calls),
        final_params=np.array(result.final_trace.params),
        wall_clock=elapsed,
        param_samples=_complete(result.param_samples),
    )


def _fmt(x):
    return repr(float(x))


def _write_outputs(config, summary):
    out = Path(config.output_dir)
    traj_dir = out / "trajectories"
    traj_dir.mkdir(parents=True, exist_ok=True)
    for rec in summary.records:
        with open(traj_dir / f"run_{rec.run:03d}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["iteration", "logscore"])
            for k, score in enumerate(rec.trajectory, start=1):
                writer.writerow([k, _fmt(score)])
    with open(out / "final_scores.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["run", "seed", "final_logscore", "acceptance_rate", "simulator_calls",
                         "iterations"])
        for rec in summary.records:
            writer.writerow([rec.run, rec.seed, _fmt(rec.final_logscore),
                             _fmt(rec.acceptance_rate), rec.simulator_calls, len(rec.trajectory)])
    with open(out / "summary.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for rec in summary.records:
            row = {
                "label": summary.label,
                "method": summary.method,
                "simulator": summary.simulator,
                "gamma": summary.gamma,
                "run": rec.run,
                "seed": rec.seed,
                "final_logscore": rec.final_logscore,
                "acceptance_count": rec.acceptance_count,
                "proposals": rec.proposals,
                "simulator_calls": rec.simulator_calls,
                "iterations": len(rec.trajectory),
                "final_params": rec.final_params.tolist(),
            }
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    with open(out / "config.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(config.as_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")


def run_experiment(config, write=True):
    """Run ``config.runs`` independent chains with seeds ``base_seed + k``.

    Writes ``trajectories/run_NNN.csv``, ``final_scores.csv``,
    ``summary.jsonl`` and ``config.json`` under ``output_dir``. Outputs depend
    only on the config; wall-clock times are logged but never written.
    """
    build_problem(config)
    runs = range(config.runs)
    if config.parallel_chains > 1 and config.runs > 1:
        with ProcessPoolExecutor(max_workers=config.parallel_chains) as pool:
            records = list(pool.map(_run_chain, [config] * config.runs, runs))
    else:
        records = [_run_chain(config, k) for k in runs]
    records.sort(key=lambda r: r.run)
    summary = RunSummary(config.label, config.method.kind, config.simulator, config.gamma, records)
    log.info("%s: %d runs, median final log-score %.4f, wall clock %.2fs total",
             summary.label, len(records), float(np.median(summary.final_scores)),
             float(summary.wall_clock.sum()))
    if write:
        _write_outputs(config, summary)
    return summary


def oracle_check(config, summary=None, tolerance=TV_TOLERANCE):
    """Compare pooled sampled tuples against exact enumeration.

    Returns a dict with the largest per-step marginal TV distance, the joint
    TV distance over all tuples and ``passed`` (largest marginal TV below
    ``tolerance``). Every recorded complete parameter tuple of every run is
    pooled.
    """
    if config.simulator != "oracle":
        raise ConfigurationError("oracle checks need simulator: oracle")
    sim, data = build_problem(config)
    if summary is None:
        summary = run_experiment(config, write=False)
    post = oracle_enumerate(sim, data, config.gamma)
    samples = np.concatenate([r.param_samples for r in summary.records])
    empirical = empirical_tuple_distribution(samples, post)
    exact_m = post.site_marginals()
    emp_m = site_marginals(empirical, sim.horizon, len(sim.grid))
    site_tv = [total_variation(a, b) for a, b in zip(emp_m, exact_m)]
    report = {
        "method": config.method.kind,
        "samples": int(len(samples)),
        "site_tv": site_tv,
        "max_site_tv": max(site_tv),
        "joint_tv": total_variation(empirical, post.probs),
        "tolerance": tolerance,
    }
    report["passed"] = report["max_site_tv"] < tolerance
    return report


def emit_histogram_data(summaries, bins):
    """Histogram of final log-scores over shared bin edges.

    Bins are low-inclusive and high-exclusive except the last, which is
    closed. Returns ``(edges, {label: counts})``.
    """
    if bins < 1:
        raise ConfigurationError(f"bins must be >= 1, got {bins}")
    summaries = list(summaries)
    if not summaries:
        raise ConfigurationError("need at least one summary to histogram")
    pooled = np.concatenate([s.final_scores for s in summaries])
    if pooled.size == 0:
        raise ConfigurationError("summaries contain no runs")
    edges = np.histogram_bin_edges(pooled, bins=bins)
    counts = {}
    for s in summaries:
        label = s.label
        while label in counts:
            label += "_"
        counts[label] = np.histogram(s.final_scores, bins=edges)[0]
    return edges, counts


def write_histogram(summaries, bins, out_dir):
    """Write ``histogram_<label>.csv`` per summary plus ``plot_histogram.py``."""
    edges, counts = emit_histogram_data(summaries, bins)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for label, c in counts.items():
        path = out / f"histogram_{label}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["bin_low", "bin_high", "count"])
            for lo, hi, n in zip(edges[:-1], edges[1:], c):
                writer.writerow([_fmt(lo), _fmt(hi), int(n)])
        paths.append(path.name)
    (out / "plot_histogram.py").write_text(PLOT_SCRIPT.format(paths=paths), encoding="utf-8")
    return [out / p for p in paths]


def read_summary(path):
    """Load a ``summary.jsonl`` file back into a :class:`RunSummary`."""
    path = Path(path)
    if path.is_dir():
        path = path / "summary.jsonl"
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [json.loads(line) for line in fh if line.strip()]
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read summary {path}: {exc}") from None
    if not rows:
        raise ConfigurationError(f"summary {path} is empty")
    first = rows[0]
    records = [
        ChainRecord(
            run=r["run"], seed=r["seed"], final_logscore=r["final_logscore"],
            trajectory=np.empty(r["iterations"]), acceptance_count=r["acceptance_count"],
            proposals=r["proposals"], simulator_calls=r["simulator_calls"],
            final_params=np.array(r["final_params"]), wall_clock=float("nan"),
        )
        for r in rows
    ]
    return RunSummary(first["label"], first["method"], first["simulator"], first["gamma"], records)


@dataclass
class ComparisonReport:
    rows: list
    ordering_holds: bool = None
    mh_largest_iqr: bool = None

    def table(self):
        lines = [f"{'rank':>4}  {'method':<12}{'runs':>5}{'median':>12}{'q25':>12}{'q75':>12}"
                 f"{'iqr':>10}{'calls/it':>10}{'wall s':>9}"]
        for r in self.rows:
            lines.append(
                f"{r['rank']:>4}  {r['label']:<12}{r['runs']:>5}{r['median']:>12.4f}"
                f"{r['q25']:>12.4f}{r['q75']:>12.4f}{r['iqr']:>10.4f}"
                f"{r['calls_per_iteration']:>10.2f}{r['wall_clock']:>9.2f}"
            )
        if self.ordering_holds is not None:
            lines.append(f"median ordering seqmh >= pgibbs >= mh: {self.ordering_holds}")
            lines.append(f"mh has the largest IQR: {self.mh_largest_iqr}")
        return "\n".join(lines)


def compare_methods(configs, summaries=None):
    """Rank methods by median final log-score.

    All configs must share simulator, data and gamma. When the three
    methods ``seqmh``, ``pgibbs`` and ``mh`` are present the report also
    flags whether their medians are ordered that way and whether MH has the
    widest interquartile range.
    """
    configs = list(configs)
    if not configs:
        raise ConfigurationError("nothing to compare")
    ref = configs[0]
    for c in configs[1:]:
        if (c.simulator, c.data_path, c.gamma) != (ref.simulator, ref.data_path, ref.gamma):
            raise ConfigurationError(
                "compared configs must share simulator, data_path and gamma "
                f"({c.label} differs from {ref.label})"
            )
    if summaries is None:
        summaries = [run_experiment(c) for c in configs]
    rows = []
    for c, s in zip(configs, summaries):
        scores = s.final_scores
        q25, med, q75 = np.percentile(scores, [25, 50, 75])
        rows.append({
            "label": c.label, "method": c.method.kind, "runs": len(scores),
            "median": float(med), "q25": float(q25), "q75": float(q75),
            "iqr": float(q75 - q25),
            "calls_per_iteration": float(np.mean(s.calls_per_iteration())),
            "wall_clock": float(s.wall_clock.sum()),
        })
    order = sorted(range(len(rows)), key=lambda k: -rows[k]["median"])
    for rank, k in enumerate(order, start=1):
        rows[k]["rank"] = rank
    rows = [rows[k] for k in order]
    report = ComparisonReport(rows)
    by_method = {r["method"]: r for r in rows}
    if {"seqmh", "pgibbs", "mh"} <= set(by_method):
        seq, pg, mh = by_method["seqmh"], by_method["pgibbs"], by_method["mh"]
        report.ordering_holds = seq["median"] >= pg["median"] >= mh["median"]
        report.mh_largest_iqr = mh["iqr"] >= max(seq["iqr"], pg["iqr"])
    return report


def write_comparison(report, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        keys = ["rank", "label", "method", "runs", "median", "q25", "q75", "iqr",
                "calls_per_iteration"]
        writer.writerow(keys)
        for r in report.rows:
            writer.writerow([r[k] if isinstance(r[k], (int, str)) else _fmt(r[k]) for k in keys])

