"""A tiny discrete random walk whose posterior can be enumerated exactly.

Each step draws one value from a small grid, the state moves by
``u_t - 0.5`` and is emitted unchanged. The distance to the data is the
absolute difference. With three steps and four grid values there are only
64 parameter tuples, so :func:`oracle_enumerate` gives the exact posterior
every inference engine is checked against.
"""

import csv
import itertools
from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigurationError
from ..trace import Simulator

__all__ = [
    "DiscreteOracle",
    "OraclePosterior",
    "empirical_tuple_distribution",
    "oracle_enumerate",
    "read_oracle_data",
    "site_marginals",
    "total_variation",
    "write_oracle_data",
]

DEFAULT_GRID = (0.125, 0.375, 0.625, 0.875)
MAX_TUPLES = 10**6


class DiscreteOracle(Simulator):
    """Random walk ``s_t = s_{t-1} + (u_t - 0.5)`` with ``u_t`` uniform on a grid."""

    param_dim = 1

    def __init__(self, horizon=3, grid=DEFAULT_GRID, init_state=0.0):
        if horizon < 1:
            raise ConfigurationError("horizon must be at least 1")
        self.horizon = int(horizon)
        self.grid = tuple(float(g) for g in grid)
        if len(self.grid) < 1 or len(set(self.grid)) != len(self.grid):
            raise ConfigurationError("grid must contain distinct values")
        self._grid = np.array(self.grid)
        self.init_hyper = float(init_state)
        self.param_hyper = self.grid

    def initialize(self):
        return self.init_hyper

    def sample_params(self, rng):
        return np.array([self._grid[rng.integers(len(self._grid))]])

    def prob_sample(self, params):
        u = np.asarray(params, dtype=float).reshape(-1)
        if all(self.in_support(v, 0) for v in u):
            return -len(u) * np.log(len(self.grid))
        return -np.inf

    def in_support(self, value, component=0):
        return float(value) in self.grid

    def simulate(self, state, params):
        return state + (float(params[0]) - 0.5)

    def emit(self, state):
        return state

    def distances(self, emission, data, step):
        return np.array([abs(emission - float(data[step - 1]))])

    def check_data(self, data):
        if len(data) != self.horizon:
            raise ConfigurationError(
                f"oracle data has {len(data)} observations, horizon is {self.horizon}"
            )


@dataclass(frozen=True)
class OraclePosterior:
    """Exact posterior over every parameter tuple of a :class:`DiscreteOracle`."""

    tuples: np.ndarray  # (K**T, T) grid values
    probs: np.ndarray  # (K**T,)
    grid: tuple

    def index_of(self, tuples):
        """Row index into ``self.tuples`` for each row of ``tuples``."""
        lookup = {v: k for k, v in enumerate(self.grid)}
        tuples = np.atleast_2d(tuples)
        base = len(self.grid)
        idx = np.zeros(len(tuples), dtype=np.int64)
        for col in range(tuples.shape[1]):
            idx = idx * base + np.array([lookup[float(v)] for v in tuples[:, col]])
        return idx

    def site_marginals(self):
        return site_marginals(self.probs, self.tuples.shape[1], len(self.grid))


def oracle_enumerate(sim, data, gamma, max_tuples=MAX_TUPLES):
    """Score every parameter tuple exactly and normalize.

    Computed directly from cumulative sums, without the trace machinery,
    so it stays an independent check on the engines.
    """
    if not isinstance(sim, DiscreteOracle):
        raise ConfigurationError("enumeration requires a DiscreteOracle")
    sim.check_data(data)
    k, horizon = len(sim.grid), sim.horizon
    if k**horizon > max_tuples:
        raise ConfigurationError(
            f"{k}**{horizon} = {k**horizon} tuples exceeds the enumeration limit {max_tuples}"
        )
    tuples = np.array(list(itertools.product(sim.grid, repeat=horizon)), dtype=float)
    states = sim.init_hyper + np.cumsum(tuples - 0.5, axis=1)
    dist = np.abs(states - np.asarray(data, dtype=float)[None, :]).sum(axis=1)
    logp = -float(gamma) * dist if gamma > 0 else np.zeros(len(tuples))
    logp -= logp.max()
    probs = np.exp(logp)
    probs /= probs.sum()
    return OraclePosterior(tuples, probs, sim.grid)


def empirical_tuple_distribution(samples, posterior):
    """Histogram of parameter tuples over the rows of ``posterior.tuples``.

    ``samples`` has shape ``(N, T)`` or ``(N, T, 1)``.
    """
    samples = np.asarray(samples, dtype=float)
    samples = samples.reshape(len(samples), -1)
    counts = np.bincount(posterior.index_of(samples), minlength=len(posterior.probs))
    return counts / counts.sum()


def site_marginals(probs, horizon, k):
    """Per-step marginal tables, shape ``(T, K)``, from a joint over ``K**T`` tuples."""
    joint = np.asarray(probs).reshape((k,) * horizon)
    axes = range(horizon)
    return np.array([joint.sum(axis=tuple(a for a in axes if a != t)) for t in axes])


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def write_oracle_data(observations, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "observation"])
        for t, r in enumerate(observations, start=1):
            writer.writerow([t, repr(float(r))])


def read_oracle_data(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["step", "observation"]:
            raise ConfigurationError(f"{path}: expected header 'step,observation'")
        rows = sorted((int(r["step"]), float(r["observation"])) for r in reader)
    steps = [s for s, _ in rows]
    if steps != list(range(1, len(rows) + 1)):
        raise ConfigurationError(f"{path}: steps must be 1..T without gaps")
    return np.array([r for _, r in rows])
