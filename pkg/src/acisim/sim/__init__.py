"""Synthetic workload generation, discretization and scenario runners."""

from .discretize import BinningSpec, ColumnBinning, default_edge_binning, discretize
from .scenarios import SCENARIOS, RunConfig, run_scenario
from .workload import (
    BYTES_PER_PIXEL,
    METRIC_COLUMNS,
    DeviceProfile,
    EnvState,
    MetricsRow,
    ScenarioEvent,
    apply_event,
    generate_batch,
    load_events,
    make_fleet,
    read_metrics_csv,
    save_events,
    write_metrics_csv,
)

__all__ = [
    "BYTES_PER_PIXEL",
    "BinningSpec",
    "ColumnBinning",
    "DeviceProfile",
    "EnvState",
    "METRIC_COLUMNS",
    "MetricsRow",
    "RunConfig",
    "SCENARIOS",
    "ScenarioEvent",
    "apply_event",
    "run_scenario",
    "default_edge_binning",
    "discretize",
    "generate_batch",
    "load_events",
    "make_fleet",
    "read_metrics_csv",
    "save_events",
    "write_metrics_csv",
]
