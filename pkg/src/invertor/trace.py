"""Simulator interface and cached execution traces.

A sequential simulator is Markovian: ``s_t = simulate(s_{t-1}, u_t)`` and
``o_t = emit(s_t)``, with per-step parameters ``u_t`` drawn independently
from a prior. Because both maps are deterministic for the simulators we
invert, a :class:`Trace` caches every intermediate state. Editing ``u_t``
invalidates only the suffix ``t..T``, which :func:`recompute_suffix`
re-simulates.

Step indices are 1-based throughout (``u_1 .. u_T``; ``states[0]`` is
``s_0``). Component indices within a parameter block are 0-based.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import CoherenceError, ConfigurationError, DomainError
from .likelihood import step_log_likelihood

__all__ = [
    "CallCounter",
    "Simulator",
    "Trace",
    "edit_site",
    "extend_trace",
    "init_trace",
    "recompute_suffix",
    "replay_states",
    "trace_from_params",
    "edit_block",
]


@dataclass
class CallCounter:
    """Number of state-producing simulator calls made by one chain."""

    initialize: int = 0
    simulate: int = 0

    @property
    def total(self):
        return self.initialize + self.simulate


class Simulator(ABC):
    """Procedural interface a pluggable sequential simulator must satisfy.

    Subclasses set ``param_dim`` (n), ``horizon`` (T), ``init_hyper`` and
    ``param_hyper``, and implement the procedures below. ``simulate`` and
    ``emit`` must be pure. States and emissions must not be mutated after
    they are returned; traces share them freely.
    """

    param_dim: int
    horizon: int
    init_hyper = None
    param_hyper = None

    # -- initial state -----------------------------------------------------
    @abstractmethod
    def initialize(self):
        """Return ``s_0``."""

    def prob_init(self, state):
        """Log-density of ``state`` under the initial distribution."""
        return 0.0 if self.states_equal(state, self.initialize()) else -np.inf

    # -- parameters ----------------------------------------------------------
    @abstractmethod
    def sample_params(self, rng):
        """Draw one parameter block ``u_t`` (array of ``param_dim`` values)."""

    @abstractmethod
    def prob_sample(self, params):
        """Log-density of a parameter block under the prior."""

    def sample_site(self, rng, component):
        """Draw a single component from its prior marginal."""
        return float(self.sample_params(rng)[component])

    @abstractmethod
    def in_support(self, value, component):
        """Whether ``value`` is a legal value for ``component``."""

    # -- dynamics ------------------------------------------------------------
    @abstractmethod
    def simulate(self, state, params):
        """Return the next state. Deterministic and pure."""

    def prob_sim(self, new_state, state, params):
        """Log-probability of ``new_state``: 0 at the deterministic image, else -inf."""
        return 0.0 if self.states_equal(new_state, self.simulate(state, params)) else -np.inf

    @abstractmethod
    def emit(self, state):
        """Return the emission of ``state``. Deterministic and pure."""

    def prob_emit(self, emission, state):
        """Log-probability of ``emission``: 0 at the deterministic image, else -inf."""
        return 0.0 if self.emissions_equal(emission, self.emit(state)) else -np.inf

    # -- likelihood ----------------------------------------------------------
    @abstractmethod
    def distances(self, emission, data, step):
        """Per-location nonnegative distances between ``emission`` and ``data`` at ``step``."""

    def distance_likelihood(self, emission, data, step, gamma):
        """Bernoulli success probability ``k_gamma(o_t, r)`` in [0, 1]."""
        return float(np.exp(step_log_likelihood(self.distances(emission, data, step), gamma)))

    def check_data(self, data):
        """Raise :class:`ConfigurationError` if ``data`` does not fit this simulator."""

    # -- equality hooks used by the delta densities and tests ---------------
    def states_equal(self, a, b):
        return _deep_equal(a, b)

    def emissions_equal(self, a, b):
        return _deep_equal(a, b)


def _deep_equal(a, b):
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    if isinstance(a, (tuple, list)) and isinstance(b, (tuple, list)):
        return len(a) == len(b) and all(_deep_equal(x, y) for x, y in zip(a, b))
    return a == b


@dataclass(frozen=True, eq=False)
class Trace:
    """One realization of the sequential model, possibly partial.

    ``params`` has shape ``(length, n)`` and is read-only. ``states`` holds
    ``s_0 .. s_length``. ``stale_from`` is the first step whose cached state
    no longer matches ``params`` (``None`` when coherent).
    """

    params: np.ndarray
    states: tuple
    emissions: tuple
    step_loglik: np.ndarray
    stale_from: int = None
    total_logscore: float = field(init=False)

    def __post_init__(self):
        self.params.flags.writeable = False
        self.step_loglik.flags.writeable = False
        object.__setattr__(self, "total_logscore", float(np.sum(self.step_loglik)))

    @property
    def length(self):
        return self.params.shape[0]

    def is_coherent(self):
        return self.stale_from is None

    def same_as(self, other):
        """Bitwise equality of parameters, log-likelihoods and emissions."""
        return (
            self.stale_from == other.stale_from
            and self.params.shape == other.params.shape
            and self.params.tobytes() == other.params.tobytes()
            and self.step_loglik.tobytes() == other.step_loglik.tobytes()
            and _deep_equal(self.emissions, other.emissions)
        )


def _check_gamma(gamma):
    gamma = float(getattr(gamma, "gamma", gamma))
    if not np.isfinite(gamma) or gamma < 0:
        raise ConfigurationError(f"gamma must be finite and nonnegative, got {gamma!r}")
    return gamma


def _as_block(sim, params):
    u = np.array(params, dtype=float).reshape(-1)
    if u.shape[0] != sim.param_dim:
        raise ConfigurationError(
            f"parameter block has {u.shape[0]} components, simulator expects {sim.param_dim}"
        )
    return u


def init_trace(sim, data, gamma, rng, counter=None, length=None):
    """Sample a trace forward from the prior and score it against ``data``.

    ``length`` defaults to the simulator horizon; smaller values build the
    partial traces used by sequential MH. Costs one ``initialize`` and
    ``length`` ``simulate`` calls.
    """
    gamma = _check_gamma(gamma)
    length = sim.horizon if length is None else int(length)
    if not 0 <= length <= sim.horizon:
        raise ConfigurationError(f"trace length {length} outside [0, {sim.horizon}]")
    sim.check_data(data)
    state = sim.initialize()
    if counter is not None:
        counter.initialize += 1
    params = np.empty((length, sim.param_dim))
    states = [state]
    emissions = []
    loglik = np.empty(length)
    for t in range(1, length + 1):
        u = _as_block(sim, sim.sample_params(rng))
        state = sim.simulate(state, u)
        emission = sim.emit(state)
        params[t - 1] = u
        states.append(state)
        emissions.append(emission)
        loglik[t - 1] = step_log_likelihood(sim.distances(emission, data, t), gamma)
    if counter is not None:
        counter.simulate += length
    return Trace(params, tuple(states), tuple(emissions), loglik)


def trace_from_params(sim, params, data, gamma, counter=None):
    """Build a coherent trace by running ``params`` forward from ``s_0``."""
    gamma = _check_gamma(gamma)
    params = np.array(params, dtype=float).reshape(-1, sim.param_dim)
    state = sim.initialize()
    if counter is not None:
        counter.initialize += 1
    states = [state]
    emissions = []
    loglik = np.empty(len(params))
    for t, u in enumerate(params, start=1):
        state = sim.simulate(state, u)
        emission = sim.emit(state)
        states.append(state)
        emissions.append(emission)
        loglik[t - 1] = step_log_likelihood(sim.distances(emission, data, t), gamma)
    if counter is not None:
        counter.simulate += len(params)
    return Trace(params, tuple(states), tuple(emissions), loglik)


def extend_trace(trace, sim, data, gamma, rng, counter=None):
    """Append one prior-sampled step to a coherent partial trace."""
    gamma = _check_gamma(gamma)
    if not trace.is_coherent():
        raise CoherenceError("cannot extend a stale trace")
    t = trace.length + 1
    if t > sim.horizon:
        raise ConfigurationError(f"trace already spans the horizon {sim.horizon}")
    u = _as_block(sim, sim.sample_params(rng))
    state = sim.simulate(trace.states[-1], u)
    if counter is not None:
        counter.simulate += 1
    emission = sim.emit(state)
    ll = step_log_likelihood(sim.distances(emission, data, t), gamma)
    return Trace(
        np.vstack([trace.params, u[None, :]]),
        trace.states + (state,),
        trace.emissions + (emission,),
        np.append(trace.step_loglik, ll),
    )


def recompute_suffix(trace, sim, t0, data, gamma, counter=None):
    """Re-simulate steps ``t0 .. length`` from the cached state ``s_{t0-1}``.

    Steps before ``t0`` are reused untouched; exactly ``length - t0 + 1``
    ``simulate`` calls are made.
    """
    gamma = _check_gamma(gamma)
    if not 1 <= t0 <= trace.length:
        raise IndexError(f"t0={t0} outside [1, {trace.length}]")
    if trace.stale_from is not None and trace.stale_from < t0:
        raise CoherenceError(
            f"trace is stale from step {trace.stale_from}, cannot recompute from {t0}"
        )
    states = list(trace.states[:t0])
    emissions = list(trace.emissions[: t0 - 1])
    loglik = np.array(trace.step_loglik, dtype=float)
    state = states[-1]
    for t in range(t0, trace.length + 1):
        state = sim.simulate(state, trace.params[t - 1])
        emission = sim.emit(state)
        states.append(state)
        emissions.append(emission)
        loglik[t - 1] = step_log_likelihood(sim.distances(emission, data, t), gamma)
    if counter is not None:
        counter.simulate += trace.length - t0 + 1
    return Trace(np.array(trace.params), tuple(states), tuple(emissions), loglik)


def edit_site(trace, site, new_value, sim=None):
    """Return a copy of ``trace`` with ``u_{t,i}`` replaced and the suffix marked stale.

    ``site`` is ``(t, i)`` with 1-based step ``t`` and 0-based component
    ``i``. When ``sim`` is given the value is checked against the prior's
    support; otherwise the unit interval is assumed.
    """
    t, i = site
    if not 1 <= t <= trace.length:
        raise IndexError(f"step {t} outside [1, {trace.length}]")
    if not 0 <= i < trace.params.shape[1]:
        raise IndexError(f"component {i} outside [0, {trace.params.shape[1]})")
    value = float(new_value)
    ok = sim.in_support(value, i) if sim is not None else 0.0 <= value <= 1.0
    if not ok:
        raise DomainError(f"value {value!r} outside the prior support of component {i}")
    params = np.array(trace.params)
    params[t - 1, i] = value
    stale = t if trace.stale_from is None else min(t, trace.stale_from)
    return replace(trace, params=params, step_loglik=np.array(trace.step_loglik), stale_from=stale)


def edit_block(trace, t, new_block, sim):
    """Replace the whole parameter block ``u_t``; the suffix becomes stale."""
    if not 1 <= t <= trace.length:
        raise IndexError(f"step {t} outside [1, {trace.length}]")
    u = _as_block(sim, new_block)
    for i, v in enumerate(u):
        if not sim.in_support(v, i):
            raise DomainError(f"value {v!r} outside the prior support of component {i}")
    params = np.array(trace.params)
    params[t - 1] = u
    stale = t if trace.stale_from is None else min(t, trace.stale_from)
    return replace(trace, params=params, step_loglik=np.array(trace.step_loglik), stale_from=stale)


def replay_states(sim, params):
    """States ``s_0 .. s_len`` obtained by running ``params`` forward."""
    state = sim.initialize()
    out = [state]
    for u in np.asarray(params):
        state = sim.simulate(state, u)
        out.append(state)
    return out
