"""Fog-side logic: device classification, the model registry, donor
selection and merging, fog model training and client reassignment."""

from .classify import classify_devices
from .fog import (
    FOG_COLUMNS,
    FogMetricsRow,
    expected_fulfillment,
    fog_train,
    read_fog_csv,
    reassign_clients,
    write_fog_csv,
)
from .merge import merge_cpts, merge_donors, merge_via_refit, select_donors
from .registry import ClusterState, RegistryEntry, entry_for, export_registry, register

__all__ = [
    "classify_devices",
    "ClusterState",
    "RegistryEntry",
    "register",
    "entry_for",
    "export_registry",
    "select_donors",
    "merge_cpts",
    "merge_via_refit",
    "merge_donors",
    "FogMetricsRow",
    "FOG_COLUMNS",
    "fog_train",
    "expected_fulfillment",
    "reassign_clients",
    "write_fog_csv",
    "read_fog_csv",
]
