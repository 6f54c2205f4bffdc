"""Resampling schemes and weight diagnostics for particle populations."""

import numpy as np
from scipy.special import logsumexp

from ..exceptions import DegeneracyError

__all__ = [
    "effective_sample_size",
    "multinomial_resample",
    "normalized_weights",
    "systematic_resample",
]


def normalized_weights(log_weights, step=None):
    """Normalize log-weights stably via max subtraction.

    Raises :class:`DegeneracyError` when no weight is finite.
    """
    lw = np.asarray(log_weights, dtype=float)
    if lw.size == 0 or not np.any(np.isfinite(lw)) or np.any(lw == np.inf):
        where = f" at step {step}" if step is not None else ""
        raise DegeneracyError(f"all particle weights are zero{where}", step=step)
    w = np.exp(lw - lw.max())
    return w / w.sum()


def _cdf(w):
    cdf = np.cumsum(w)
    cdf[np.flatnonzero(w)[-1]:] = 1.0
    return cdf


def multinomial_resample(log_weights, count, rng, step=None):
    """Draw ``count`` ancestor indices i.i.d. from the normalized weights."""
    w = normalized_weights(log_weights, step)
    # inverse-CDF lookup; zero-weight indices have empty CDF intervals and are never drawn
    cdf = _cdf(w)
    u = rng.random(count)
    return np.searchsorted(cdf, u, side="right")


def systematic_resample(log_weights, count, rng, step=None):
    """Systematic resampling: one uniform offset, ``count`` evenly spaced points."""
    w = normalized_weights(log_weights, step)
    cdf = _cdf(w)
    u = (rng.random() + np.arange(count)) / count
    return np.searchsorted(cdf, u, side="right")


def effective_sample_size(log_weights):
    """``(sum w)^2 / sum w^2``, between 1 and the number of particles."""
    lw = np.asarray(log_weights, dtype=float)
    normalized_weights(lw)
    finite = lw[np.isfinite(lw)]
    return float(np.exp(2 * logsumexp(finite) - logsumexp(2 * finite)))
