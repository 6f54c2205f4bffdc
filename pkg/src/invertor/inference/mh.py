"""Single-site random-scan Metropolis-Hastings and its sequential variant.

Proposals resimulate one site from its prior, so the acceptance ratio is the
ratio of downstream likelihoods: only steps at or after the edited one can
change.
"""

import math

import numpy as np

from ..exceptions import ConfigurationError
from ..trace import CallCounter, edit_block, edit_site, extend_trace, init_trace, recompute_suffix
from .base import ChainResult, make_rng

__all__ = ["mh_transition", "run_mh", "run_sequential_mh"]


def _accept_prob(delta):
    if math.isnan(delta):
        # both -inf: neither state has support, so moving costs nothing
        return 1.0
    return math.exp(min(0.0, delta))


def mh_transition(trace, sim, data, gamma, rng, counter=None, block=False):
    """One single-site MH step on a coherent (possibly partial) trace.

    A site ``(t, i)`` is drawn uniformly among the ``length * n`` scalar
    sites, or a whole block ``u_t`` when ``block`` is set. Returns
    ``(trace, accepted)``; on rejection the input trace is returned.
    """
    length, n = trace.params.shape
    if length == 0:
        raise ConfigurationError("cannot run MH on an empty trace")
    if block:
        t = int(rng.integers(length)) + 1
        proposal = edit_block(trace, t, sim.sample_params(rng), sim)
    else:
        site = int(rng.integers(length * n))
        t, i = site // n + 1, site % n
        proposal = edit_site(trace, (t, i), sim.sample_site(rng, i), sim)
    proposal = recompute_suffix(proposal, sim, t, data, gamma, counter=counter)
    delta = float(np.sum(proposal.step_loglik[t - 1:]) - np.sum(trace.step_loglik[t - 1:]))
    if rng.random() < _accept_prob(delta):
        return proposal, True
    return trace, False


def _pad(params, horizon):
    out = np.full((horizon, params.shape[1]), np.nan)
    out[: params.shape[0]] = params
    return out


def run_mh(sim, data, gamma, iterations, rng=None, block=False, record_params=False):
    """Run ``iterations`` MH transitions from a forward-sampled trace."""
    if iterations < 1:
        raise ConfigurationError(f"iterations must be >= 1, got {iterations}")
    rng, seed = make_rng(rng)
    counter = CallCounter()
    trace = init_trace(sim, data, gamma, rng, counter)
    scores = np.empty(iterations)
    samples = np.empty((iterations,) + trace.params.shape) if record_params else None
    accepted = 0
    for k in range(iterations):
        trace, ok = mh_transition(trace, sim, data, gamma, rng, counter, block)
        accepted += ok
        scores[k] = trace.total_logscore
        if record_params:
            samples[k] = trace.params
    return ChainResult(trace, scores, accepted, counter.total, seed,
                       proposals=iterations, method="mh", param_samples=samples)


def run_sequential_mh(sim, data, gamma, per_step_transitions=10, rng=None, block=False,
                      record_params=False):
    """Incorporate observations one step at a time, with MH in between.

    After step ``t`` joins the trace, ``per_step_transitions * t`` transitions
    run over the ``t * n`` sites seen so far, scored only on steps ``1..t``.
    """
    if per_step_transitions < 1:
        raise ConfigurationError(f"per_step_transitions must be >= 1, got {per_step_transitions}")
    rng, seed = make_rng(rng)
    counter = CallCounter()
    horizon = sim.horizon
    total = per_step_transitions * horizon * (horizon + 1) // 2
    scores = np.empty(total)
    samples = np.empty((total, horizon, sim.param_dim)) if record_params else None
    trace = init_trace(sim, data, gamma, rng, counter, length=0)
    accepted = 0
    k = 0
    for _ in range(horizon):
        trace = extend_trace(trace, sim, data, gamma, rng, counter)
        for _ in range(per_step_transitions * trace.length):
            trace, ok = mh_transition(trace, sim, data, gamma, rng, counter, block)
            accepted += ok
            scores[k] = trace.total_logscore
            if record_params:
                samples[k] = _pad(trace.params, horizon)
            k += 1
    return ChainResult(trace, scores, accepted, counter.total, seed,
                       proposals=total, method="seqmh", param_samples=samples)
