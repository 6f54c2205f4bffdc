"""Concrete simulators: the synthetic lobe model and the enumerable oracle."""

from .lobe import (
    EmissionSegment,
    LobeParams,
    LobeSimulator,
    LobeState,
    default_well_locations,
    lobe_distance,
    lobe_emit,
    lobe_simulate,
    make_synthetic_dataset,
)
from .oracle import (
    DiscreteOracle,
    OraclePosterior,
    empirical_tuple_distribution,
    oracle_enumerate,
    read_oracle_data,
    site_marginals,
    total_variation,
    write_oracle_data,
)
from .welllogs import WellLog, WellLogSet, read_well_logs, write_well_logs

__all__ = [
    "DiscreteOracle",
    "EmissionSegment",
    "LobeParams",
    "LobeSimulator",
    "LobeState",
    "OraclePosterior",
    "WellLog",
    "WellLogSet",
    "default_well_locations",
    "empirical_tuple_distribution",
    "lobe_distance",
    "lobe_emit",
    "lobe_simulate",
    "make_synthetic_dataset",
    "oracle_enumerate",
    "read_oracle_data",
    "read_well_logs",
    "site_marginals",
    "total_variation",
    "write_oracle_data",
    "write_well_logs",
]
