"""Chain results, method specifications and random-source helpers."""

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import ConfigurationError

__all__ = ["ChainResult", "MethodSpec", "METHOD_KINDS", "make_rng", "normalize_kind"]

METHOD_KINDS = ("mh", "seqmh", "pgibbs", "hybrid")

_ALIASES = {
    "mh": "mh",
    "metropolis-hastings": "mh",
    "seqmh": "seqmh",
    "sequential-mh": "seqmh",
    "sequential_mh": "seqmh",
    "pgibbs": "pgibbs",
    "pg": "pgibbs",
    "particle-gibbs": "pgibbs",
    "particle_gibbs": "pgibbs",
    "particlegibbs": "pgibbs",
    "hybrid": "hybrid",
}


def normalize_kind(kind):
    """Canonical method name for ``kind`` or its aliases."""
    out = _ALIASES.get(str(kind).lower())
    if out is None:
        raise ConfigurationError(f"unknown method kind {kind!r}; expected one of {METHOD_KINDS}")
    return out


def make_rng(seed):
    """Return ``(generator, seed)``.

    Integer seeds build a counter-based Philox generator so chain ``k`` of an
    experiment depends only on its own seed. An existing generator is passed
    through with ``seed=None``.
    """
    if isinstance(seed, np.random.Generator):
        return seed, None
    if seed is None:
        return np.random.Generator(np.random.Philox()), None
    seed = int(seed)
    if seed < 0:
        raise ConfigurationError(f"seed must be nonnegative, got {seed}")
    return np.random.Generator(np.random.Philox(seed)), seed


@dataclass
class ChainResult:
    """Output of one inference chain.

    ``logscore_trajectory`` holds one entry per recorded iteration (MH
    transition, PG sweep, or inner step of a hybrid cycle).
    ``param_samples``, when requested, has shape ``(iterations, T, n)``; for
    sequential MH, steps not yet incorporated are NaN.
    """

    final_trace: object
    logscore_trajectory: np.ndarray
    acceptance_count: int
    simulator_calls: int
    seed: int = None
    proposals: int = 0
    method: str = ""
    param_samples: np.ndarray = field(default=None, repr=False)

    @property
    def iterations(self):
        return len(self.logscore_trajectory)

    @property
    def final_logscore(self):
        return float(self.final_trace.total_logscore)

    @property
    def acceptance_rate(self):
        return self.acceptance_count / self.proposals if self.proposals else float("nan")


def _positive(name, value, minimum=1):
    if value is None:
        raise ConfigurationError(f"{name} is required")
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ConfigurationError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class MethodSpec:
    """One inference strategy and its hyperparameters.

    ``iterations`` counts MH transitions (``mh``) or sweeps (``pgibbs``).
    ``inner_sweeps`` is the per-step transition multiplier for ``seqmh`` and
    the PG sweeps per cycle for ``hybrid``.
    """

    kind: str
    iterations: int = None
    particles: int = None
    inner_sweeps: int = None
    mh_per_cycle: int = None
    cycles: int = None
    block_sites: bool = False
    resampling: str = "multinomial"

    def __post_init__(self):
        kind = normalize_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.resampling not in ("multinomial", "systematic"):
            raise ConfigurationError(f"unknown resampling scheme {self.resampling!r}")
        if kind == "mh":
            _positive("iterations", self.iterations)
        elif kind == "seqmh":
            _positive("inner_sweeps", self.inner_sweeps)
        elif kind == "pgibbs":
            _positive("iterations", self.iterations)
            _positive("particles", self.particles, 2)
        else:
            _positive("particles", self.particles, 2)
            _positive("inner_sweeps", self.inner_sweeps)
            _positive("mh_per_cycle", self.mh_per_cycle)
            _positive("cycles", self.cycles)

    @classmethod
    def defaults(cls, kind):
        """Reference settings: MH 500, PG 10 particles x 50 sweeps, seqMH 10t, hybrid 10 x (10 PG + 50 MH)."""
        kind = normalize_kind(kind)
        table = {
            "mh": cls("mh", iterations=500),
            "seqmh": cls("seqmh", inner_sweeps=10),
            "pgibbs": cls("pgibbs", iterations=50, particles=10),
            "hybrid": cls("hybrid", particles=10, inner_sweeps=10, mh_per_cycle=50, cycles=10),
        }
        return table[kind]

    def recorded_iterations(self, horizon):
        """Length of the log-score trajectory these settings produce."""
        if self.kind in ("mh", "pgibbs"):
            return self.iterations
        if self.kind == "seqmh":
            return self.inner_sweeps * horizon * (horizon + 1) // 2
        return self.cycles * (self.inner_sweeps + self.mh_per_cycle)

    def as_dict(self):
        keys = {
            "mh": ("iterations",),
            "seqmh": ("inner_sweeps",),
            "pgibbs": ("iterations", "particles"),
            "hybrid": ("particles", "inner_sweeps", "mh_per_cycle", "cycles"),
        }[self.kind]
        out = {"kind": self.kind}
        out.update({k: getattr(self, k) for k in keys})
        if self.block_sites:
            out["block_sites"] = True
        if self.resampling != "multinomial":
            out["resampling"] = self.resampling
        return out
