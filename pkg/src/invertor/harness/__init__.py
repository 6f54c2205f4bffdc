"""Experiment harness: config files, multi-run orchestration and reports."""

from .config import ExperimentConfig, config_from_dict, parse_config
from .experiment import (
    ChainRecord,
    ComparisonReport,
    RunSummary,
    build_problem,
    compare_methods,
    emit_histogram_data,
    oracle_check,
    read_summary,
    run_experiment,
    write_comparison,
    write_histogram,
)

__all__ = [
    "ChainRecord",
    "ComparisonReport",
    "ExperimentConfig",
    "RunSummary",
    "build_problem",
    "compare_methods",
    "config_from_dict",
    "emit_histogram_data",
    "oracle_check",
    "parse_config",
    "read_summary",
    "run_experiment",
    "write_comparison",
    "write_histogram",
]
