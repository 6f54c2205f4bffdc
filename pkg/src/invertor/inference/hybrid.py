"""Alternating particle Gibbs sweeps and single-site MH on one trace."""

import numpy as np

from ..exceptions import ConfigurationError
from ..trace import CallCounter, init_trace
from .base import ChainResult, make_rng
from .mh import mh_transition
from .pgibbs import csmc_sweep

__all__ = ["run_hybrid"]


def run_hybrid(sim, data, gamma, particles, pg_sweeps, mh_transitions, cycles, rng=None,
               block=False, resampling="multinomial", record_params=False):
    """Repeat ``cycles`` times: ``pg_sweeps`` CSMC sweeps, then ``mh_transitions`` MH steps.

    The log-score is recorded after every sweep and every transition, giving
    ``cycles * (pg_sweeps + mh_transitions)`` entries.
    """
    for name, value in (("pg_sweeps", pg_sweeps), ("mh_transitions", mh_transitions),
                        ("cycles", cycles)):
        if value < 1:
            raise ConfigurationError(f"{name} must be >= 1, got {value}")
    if particles < 2:
        raise ConfigurationError(f"particles must be >= 2, got {particles}")
    rng, seed = make_rng(rng)
    counter = CallCounter()
    trace = init_trace(sim, data, gamma, rng, counter)
    total = cycles * (pg_sweeps + mh_transitions)
    scores = np.empty(total)
    samples = np.empty((total,) + trace.params.shape) if record_params else None
    accepted = 0
    k = 0
    for _ in range(cycles):
        for step in range(pg_sweeps + mh_transitions):
            if step < pg_sweeps:
                new = csmc_sweep(trace, particles, sim, data, gamma, rng, counter, resampling)
                accepted += new is not trace
                trace = new
            else:
                trace, ok = mh_transition(trace, sim, data, gamma, rng, counter, block)
                accepted += ok
            scores[k] = trace.total_logscore
            if record_params:
                samples[k] = trace.params
            k += 1
    return ChainResult(trace, scores, accepted, counter.total, seed, proposals=total,
                       method="hybrid", param_samples=samples)
