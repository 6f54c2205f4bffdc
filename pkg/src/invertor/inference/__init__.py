"""Monte Carlo inference engines over any :class:`~invertor.trace.Simulator`."""

from .base import METHOD_KINDS, ChainResult, MethodSpec, make_rng
from .hybrid import run_hybrid
from .mh import mh_transition, run_mh, run_sequential_mh
from .pgibbs import CSMCPopulation, csmc_sweep, run_particle_gibbs
from .resampling import (
    effective_sample_size,
    multinomial_resample,
    normalized_weights,
    systematic_resample,
)

__all__ = [
    "CSMCPopulation",
    "ChainResult",
    "METHOD_KINDS",
    "MethodSpec",
    "csmc_sweep",
    "effective_sample_size",
    "make_rng",
    "mh_transition",
    "multinomial_resample",
    "normalized_weights",
    "run_hybrid",
    "run_method",
    "run_mh",
    "run_particle_gibbs",
    "run_sequential_mh",
    "systematic_resample",
]


def run_method(spec, sim, data, gamma, seed=None, record_params=False):
    """Run the engine described by a :class:`MethodSpec`."""
    if spec.kind == "mh":
        return run_mh(sim, data, gamma, spec.iterations, seed, spec.block_sites, record_params)
    if spec.kind == "seqmh":
        return run_sequential_mh(sim, data, gamma, spec.inner_sweeps, seed, spec.block_sites,
                                 record_params)
    if spec.kind == "pgibbs":
        return run_particle_gibbs(sim, data, gamma, spec.particles, spec.iterations, seed,
                                  spec.resampling, record_params)
    return run_hybrid(sim, data, gamma, spec.particles, spec.inner_sweeps, spec.mh_per_cycle,
                      spec.cycles, seed, spec.block_sites, spec.resampling, record_params)
