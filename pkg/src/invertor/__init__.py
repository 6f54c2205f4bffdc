"""Invert sequential simulators by Monte Carlo inference on a distance likelihood."""

from .estimator import SimulatorInversion
from .exceptions import (
    CoherenceError,
    ConfigurationError,
    DegeneracyError,
    DomainError,
    InvertorError,
)
from .inference import ChainResult, MethodSpec, run_method
from .likelihood import KernelConfig, kernel_eval, step_log_likelihood, trace_log_score
from .trace import CallCounter, Simulator, Trace, edit_site, init_trace, recompute_suffix

__version__ = "0.1.0"

__all__ = [
    "CallCounter",
    "ChainResult",
    "CoherenceError",
    "ConfigurationError",
    "DegeneracyError",
    "DomainError",
    "InvertorError",
    "KernelConfig",
    "MethodSpec",
    "Simulator",
    "SimulatorInversion",
    "Trace",
    "edit_site",
    "init_trace",
    "kernel_eval",
    "recompute_suffix",
    "run_method",
    "step_log_likelihood",
    "trace_log_score",
]
