"""Distance-based pseudo-likelihood.

Each step contributes the log of a Bernoulli success probability
``k = exp(-gamma * sum_l d_l)`` where ``d_l`` is the distance between the
generated and the observed record at location ``l``. The observation flag is
always conditioned to ``True`` so the contribution is simply ``log k``.
Everything stays in the log domain.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import CoherenceError, DomainError

__all__ = [
    "KernelConfig",
    "ObservationFlag",
    "kernel_eval",
    "log_kernel",
    "step_log_likelihood",
    "trace_log_score",
]

NORMS = ("euclidean",)


@dataclass(frozen=True)
class KernelConfig:
    """Bandwidth and norm of the exponential distance kernel."""

    gamma: float = 1.0
    norm: str = "euclidean"

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError(f"gamma must be a finite nonnegative number, got {self.gamma!r}")
        if self.norm not in NORMS:
            raise DomainError(f"unknown norm {self.norm!r}; expected one of {NORMS}")


@dataclass(frozen=True)
class ObservationFlag:
    """The Bernoulli observation ``d_t``; always ``True`` during inversion."""

    step: int
    value: bool = True


def _gamma(config):
    if isinstance(config, KernelConfig):
        return float(config.gamma)
    gamma = float(config)
    if not np.isfinite(gamma) or gamma < 0:
        raise DomainError(f"gamma must be a finite nonnegative number, got {config!r}")
    return gamma


def log_kernel(distance, config):
    """Return ``-gamma * distance``, the log of :func:`kernel_eval`."""
    gamma = _gamma(config)
    d = np.asarray(distance, dtype=float)
    if np.any(d < 0) or np.any(np.isnan(d)):
        raise DomainError("distance must be nonnegative")
    if gamma == 0.0:
        # avoids 0 * inf
        out = np.zeros_like(d)
    else:
        out = -gamma * d
    return float(out) if out.ndim == 0 else out


def kernel_eval(distance, config):
    """Exponential kernel ``exp(-gamma * distance)``, a probability in [0, 1].

    ``config`` is a :class:`KernelConfig` or a bare bandwidth.
    """
    return np.exp(log_kernel(distance, config))


def step_log_likelihood(per_well_distances, config):
    """Log pseudo-likelihood of one step: ``-gamma * sum(distances)``.

    Locations are treated as independent so their kernel factors multiply.
    """
    gamma = _gamma(config)
    d = np.asarray(per_well_distances, dtype=float)
    if d.ndim != 1:
        raise DomainError("per-well distances must be a 1-d array")
    if np.any(d < 0) or np.any(np.isnan(d)):
        raise DomainError("distances must be nonnegative")
    if gamma == 0.0:
        return 0.0
    total = float(np.sum(d))
    return -gamma * total if total > 0 else 0.0


def trace_log_score(trace):
    """Total log-score of a coherent trace (sum of its per-step terms)."""
    if trace.stale_from is not None:
        raise CoherenceError(
            f"trace is stale from step {trace.stale_from}; call recompute_suffix first"
        )
    return float(np.sum(trace.step_loglik))
