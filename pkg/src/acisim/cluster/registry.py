"""The leader node's model registry.

One entry per device type: its profile, latest trained model, the training
data backup that travels with the model, and the last reported fulfillment
rate. Mutation goes through :func:`register`, which replaces an existing
entry for the same device type in place (keeping registration order stable,
which the reassignment tie-break depends on).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..bayes.model import BayesNet
from ..bayes.serialize import to_document
from ..bayes.types import DiscreteBatch
from ..sim.workload import DeviceProfile

__all__ = ["RegistryEntry", "ClusterState", "register", "entry_for", "export_registry"]


@dataclass
class RegistryEntry:
    device_type: str
    profile: DeviceProfile
    model: BayesNet
    backup: DiscreteBatch
    f: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f <= 1.0:
            raise ValueError("fulfillment rate must lie in [0,1]")

    @property
    def dc(self) -> int:
        return self.profile.dc


@dataclass
class ClusterState:
    entries: list[RegistryEntry] = field(default_factory=list)
    assignment: dict[str, int] = field(default_factory=dict)
    fog_model: BayesNet | None = None


def register(state: ClusterState, entry: RegistryEntry) -> None:
    for i, existing in enumerate(state.entries):
        if existing.device_type == entry.device_type:
            state.entries[i] = entry
            return
    state.entries.append(entry)


def entry_for(state: ClusterState, device_type: str) -> RegistryEntry:
    for entry in state.entries:
        if entry.device_type == device_type:
            return entry
    raise KeyError(f"no registry entry for device type {device_type!r}")


def export_registry(state: ClusterState, path: str | Path) -> None:
    """JSON snapshot: scalars, fulfillment and model document per entry."""
    doc = {
        "entries": [
            {
                "device_type": e.device_type,
                "p": e.profile.p,
                "g": e.profile.g,
                "dc": e.dc,
                "f": e.f,
                "model": to_document(e.model),
            }
            for e in state.entries
        ],
        "assignment": dict(state.assignment),
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True))
