"""Particle Gibbs with conditional SMC over timestep-ordered blocks."""

from dataclasses import dataclass

import numpy as np

from ..exceptions import ConfigurationError, DegeneracyError
from ..likelihood import step_log_likelihood
from ..trace import CallCounter, Trace, init_trace
from .base import ChainResult, make_rng
from .resampling import multinomial_resample, systematic_resample

__all__ = ["CSMCPopulation", "csmc_sweep", "run_particle_gibbs"]

_RESAMPLERS = {"multinomial": multinomial_resample, "systematic": systematic_resample}


@dataclass
class CSMCPopulation:
    """Every particle of one conditional SMC sweep.

    Lists are indexed by step ``t - 1``. ``ancestors[t - 1][p]`` is the index
    at step ``t - 1`` that particle ``p`` at step ``t`` descends from (all
    zeros at ``t = 1``). ``selected`` is the final particle drawn.
    """

    params: list
    states: list
    emissions: list
    log_weights: list
    ancestors: list
    selected: int

    def path(self, p):
        """Indices along the ancestral line of final particle ``p``."""
        idx = [p]
        for t in range(len(self.ancestors) - 1, 0, -1):
            idx.append(int(self.ancestors[t][idx[-1]]))
        idx.reverse()
        return idx


def csmc_sweep(retained, particles, sim, data, gamma, rng, counter=None,
               resampling="multinomial", return_population=False):
    """One conditional SMC sweep; returns the newly selected trajectory.

    Particle 0 is pinned to ``retained`` and always descends from itself.
    Particles ``1..P-1`` draw ``u_t`` from the prior, so the incremental
    log-weight is just the step log-likelihood. Ancestors are resampled after
    every step.
    """
    if particles < 2:
        raise ConfigurationError(f"particles must be >= 2, got {particles}")
    if not retained.is_coherent():
        raise ConfigurationError("retained trace is stale")
    resample = _RESAMPLERS[resampling]
    horizon = retained.length
    s0 = retained.states[0]
    params, states, emissions, logw, ancestors = [], [], [], [], []
    prev_states = None
    for t in range(1, horizon + 1):
        if t == 1:
            anc = np.zeros(particles, dtype=np.int64)
        else:
            anc = np.empty(particles, dtype=np.int64)
            anc[0] = 0
            anc[1:] = resample(logw[-1], particles - 1, rng, step=t - 1)
        u_t = np.empty((particles, sim.param_dim))
        s_t = [None] * particles
        o_t = [None] * particles
        w_t = np.empty(particles)
        u_t[0] = retained.params[t - 1]
        s_t[0] = retained.states[t]
        o_t[0] = retained.emissions[t - 1]
        w_t[0] = retained.step_loglik[t - 1]
        for p in range(1, particles):
            u = np.asarray(sim.sample_params(rng), dtype=float)
            parent = s0 if t == 1 else prev_states[anc[p]]
            state = sim.simulate(parent, u)
            emission = sim.emit(state)
            u_t[p] = u
            s_t[p] = state
            o_t[p] = emission
            w_t[p] = step_log_likelihood(sim.distances(emission, data, t), gamma)
        if counter is not None:
            counter.simulate += particles - 1
        if not np.any(np.isfinite(w_t)):
            raise DegeneracyError(f"all {particles} particle weights are zero at step {t}", step=t)
        params.append(u_t)
        states.append(s_t)
        emissions.append(o_t)
        logw.append(w_t)
        ancestors.append(anc)
        prev_states = s_t

    selected = int(multinomial_resample(logw[-1], 1, rng, step=horizon)[0])
    pop = CSMCPopulation(params, states, emissions, logw, ancestors, selected)
    if selected == 0:
        new = retained
    else:
        idx = pop.path(selected)
        new = Trace(
            np.array([params[t][p] for t, p in enumerate(idx)]).reshape(horizon, sim.param_dim),
            (s0,) + tuple(states[t][p] for t, p in enumerate(idx)),
            tuple(emissions[t][p] for t, p in enumerate(idx)),
            np.array([logw[t][p] for t, p in enumerate(idx)], dtype=float),
        )
    if return_population:
        return new, pop
    return new


def run_particle_gibbs(sim, data, gamma, particles, sweeps, rng=None, resampling="multinomial",
                       record_params=False):
    """Iterate :func:`csmc_sweep` from a forward-sampled retained trace."""
    if sweeps < 1:
        raise ConfigurationError(f"sweeps must be >= 1, got {sweeps}")
    if particles < 2:
        raise ConfigurationError(f"particles must be >= 2, got {particles}")
    rng, seed = make_rng(rng)
    counter = CallCounter()
    trace = init_trace(sim, data, gamma, rng, counter)
    scores = np.empty(sweeps)
    samples = np.empty((sweeps,) + trace.params.shape) if record_params else None
    moved = 0
    for k in range(sweeps):
        new = csmc_sweep(trace, particles, sim, data, gamma, rng, counter, resampling)
        moved += new is not trace
        trace = new
        scores[k] = trace.total_logscore
        if record_params:
            samples[k] = trace.params
    return ChainResult(trace, scores, moved, counter.total, seed, proposals=sweeps,
                       method="pgibbs", param_samples=samples)
