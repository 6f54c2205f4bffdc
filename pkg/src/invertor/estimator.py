"""scikit-learn style wrapper around the inference engines.

``fit`` takes the observed data (a :class:`WellLogSet`, a path to a
well-log CSV, or an observation array for the oracle) and stores the final
trace; ``predict`` returns that trace's emissions and ``score`` evaluates its
parameters against any dataset.
"""

from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted, check_scalar

from .exceptions import ConfigurationError
from .inference import MethodSpec, run_method
from .inference.base import normalize_kind
from .simulators import LobeSimulator, WellLogSet, read_well_logs
from .trace import Simulator, trace_from_params

__all__ = ["SimulatorInversion", "check_data"]


def check_data(X, simulator):
    """Coerce ``X`` into the data type ``simulator`` expects and validate it."""
    if isinstance(X, (str, Path)):
        X = read_well_logs(X)
    if not isinstance(X, WellLogSet):
        X = np.asarray(X, dtype=float).reshape(-1)
        if not np.all(np.isfinite(X)):
            raise ConfigurationError("observations must be finite")
    simulator.check_data(X)
    return X


class SimulatorInversion(BaseEstimator):
    """Posterior search over the per-step parameters of a sequential simulator.

    Parameters
    ----------
    simulator : Simulator, optional
        Defaults to a 10-lobe :class:`LobeSimulator` whose wells are taken
        from the data at ``fit`` time.
    method : {"mh", "seqmh", "pgibbs", "hybrid"}
    gamma : float
        Kernel bandwidth.
    iterations : int
        MH transitions or PG sweeps.
    particles, per_step_transitions, pg_sweeps, mh_per_cycle, cycles : int
        Remaining hyperparameters; see :class:`MethodSpec`.
    block_sites : bool
        Propose whole parameter blocks instead of scalar sites in MH moves.
    random_state : int, optional

    Attributes
    ----------
    trace_ : Trace
    params_ : ndarray of shape (T, n)
    logscore_ : float
    logscore_trajectory_ : ndarray
    result_ : ChainResult
    simulator_ : Simulator
    """

    def __init__(self, simulator=None, method="seqmh", gamma=1.0, iterations=500, particles=10,
                 per_step_transitions=10, pg_sweeps=10, mh_per_cycle=50, cycles=10,
                 block_sites=False, random_state=None):
        self.simulator = simulator
        self.method = method
        self.gamma = gamma
        self.iterations = iterations
        self.particles = particles
        self.per_step_transitions = per_step_transitions
        self.pg_sweeps = pg_sweeps
        self.mh_per_cycle = mh_per_cycle
        self.cycles = cycles
        self.block_sites = block_sites
        self.random_state = random_state

    def _method_spec(self):
        kind = normalize_kind(self.method)
        check_scalar(self.gamma, "gamma", (int, float), min_val=0.0)
        if kind == "mh":
            check_scalar(self.iterations, "iterations", int, min_val=1)
            return MethodSpec("mh", iterations=self.iterations, block_sites=self.block_sites)
        if kind == "seqmh":
            check_scalar(self.per_step_transitions, "per_step_transitions", int, min_val=1)
            return MethodSpec("seqmh", inner_sweeps=self.per_step_transitions,
                              block_sites=self.block_sites)
        check_scalar(self.particles, "particles", int, min_val=2)
        if kind == "pgibbs":
            check_scalar(self.iterations, "iterations", int, min_val=1)
            return MethodSpec("pgibbs", iterations=self.iterations, particles=self.particles)
        check_scalar(self.pg_sweeps, "pg_sweeps", int, min_val=1)
        check_scalar(self.mh_per_cycle, "mh_per_cycle", int, min_val=1)
        check_scalar(self.cycles, "cycles", int, min_val=1)
        return MethodSpec("hybrid", particles=self.particles, inner_sweeps=self.pg_sweeps,
                          mh_per_cycle=self.mh_per_cycle, cycles=self.cycles,
                          block_sites=self.block_sites)

    def _resolve_simulator(self, X):
        if self.simulator is not None:
            if not isinstance(self.simulator, Simulator):
                raise ConfigurationError("simulator must implement the Simulator interface")
            return self.simulator
        if isinstance(X, (str, Path)):
            X = read_well_logs(X)
        if not isinstance(X, WellLogSet):
            raise ConfigurationError("pass a simulator when the data are not well logs")
        return LobeSimulator(horizon=10, wells=X.locations, terminal_penalty=True)

    def fit(self, X, y=None):
        """Run the configured engine against data ``X``. ``y`` is ignored."""
        spec = self._method_spec()
        sim = self._resolve_simulator(X)
        data = check_data(X, sim)
        seed = self.random_state
        if seed is not None and not isinstance(seed, np.random.Generator):
            seed = int(seed)
        result = run_method(spec, sim, data, float(self.gamma), seed)
        self.simulator_ = sim
        self.result_ = result
        self.trace_ = result.final_trace
        self.params_ = np.array(result.final_trace.params)
        self.logscore_ = result.final_logscore
        self.logscore_trajectory_ = np.asarray(result.logscore_trajectory)
        self.n_simulator_calls_ = result.simulator_calls
        return self

    def predict(self, X=None):
        """Emissions ``o_1 .. o_T`` of the fitted trace."""
        check_is_fitted(self, "trace_")
        return list(self.trace_.emissions)

    def score(self, X, y=None):
        """Log-score of the fitted parameters against data ``X`` (higher is better)."""
        check_is_fitted(self, "trace_")
        data = check_data(X, self.simulator_)
        return trace_from_params(self.simulator_, self.params_, data, float(self.gamma)).total_logscore
