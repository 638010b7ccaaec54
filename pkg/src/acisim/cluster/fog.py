"""The leader's fulfillment model over cluster-level metrics.

Devices report one row per served round: realized fulfillment rate plus the
environment it was achieved under (device type, congestion, stream count).
The leader bins the rate, learns a network over the four columns, and uses
it to estimate each device's expected fulfillment one stream ahead, which
drives greedy client reassignment.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..bayes.inference import markov_blanket, variable_elimination
from ..bayes.learning import hill_climb, mle_fit
from ..bayes.model import BayesNet
from ..bayes.types import DiscreteBatch, VariableSpec

__all__ = [
    "FOG_COLUMNS",
    "SLO_RATE_BINS",
    "FogMetricsRow",
    "fog_batch",
    "fog_train",
    "expected_fulfillment",
    "reassign_clients",
    "write_fog_csv",
    "read_fog_csv",
]

FOG_COLUMNS = ("slo_rate", "device_type", "congestion", "streams")
SLO_RATE_BINS = 4


@dataclass(frozen=True)
class FogMetricsRow:
    slo_rate: float
    device_type: str
    congestion: float
    streams: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.slo_rate <= 1.0:
            raise ValueError("slo_rate must lie in [0,1]")


def _rate_midpoints(bins: int) -> tuple[float, ...]:
    edges = np.linspace(0.0, 1.0, bins + 1)
    return tuple(float(m) for m in (edges[:-1] + edges[1:]) / 2.0)


def fog_batch(
    history: Sequence[FogMetricsRow], bins: int = SLO_RATE_BINS
) -> DiscreteBatch:
    """Discretize history rows: slo_rate into fixed equal-width bins labeled
    by midpoint, the environment columns onto their seen values."""
    if not history:
        raise ValueError("empty fog history")
    midpoints = _rate_midpoints(bins)
    # slo_rate last: on score ties hill_climb then orients environment
    # variables toward slo_rate, the causal reading of the fog model.
    schema = (
        VariableSpec("device_type", tuple(sorted({r.device_type for r in history}))),
        VariableSpec("congestion", tuple(sorted({r.congestion for r in history}))),
        VariableSpec("streams", tuple(sorted({r.streams for r in history}))),
        VariableSpec("slo_rate", midpoints),
    )
    inner = np.linspace(0.0, 1.0, bins + 1)[1:-1]
    codes = np.empty((len(history), 4), dtype=np.int64)
    for i, row in enumerate(history):
        codes[i, 0] = schema[0].index_of(row.device_type)
        codes[i, 1] = schema[1].index_of(row.congestion)
        codes[i, 2] = schema[2].index_of(row.streams)
        codes[i, 3] = int(np.searchsorted(inner, row.slo_rate, side="right"))
    return DiscreteBatch(schema, codes)


def fog_train(
    history: Sequence[FogMetricsRow],
    bins: int = SLO_RATE_BINS,
    smoothing: float = 0.0,
) -> BayesNet:
    """Structure search plus MLE over the discretized history.

    Defaults to unsmoothed frequencies: fog history rows are few per
    (device, load) cell, and pseudo-counts there flatten the expected
    fulfillment enough to blind the reassignment greedy."""
    data = fog_batch(history, bins)
    return mle_fit(hill_climb(data), data, smoothing=smoothing)


def _clamp_numeric(spec: VariableSpec, value: float) -> float:
    """Floor to the largest seen state <= value, else the smallest seen.

    Reassignment probes stream counts one past the assignment, which can
    leave the trained support; extrapolate from the last observed behavior
    rather than inventing states.
    """
    states = sorted(spec.states)
    below = [s for s in states if s <= value]
    return below[-1] if below else states[0]


def expected_fulfillment(model: BayesNet, evidence: Mapping[str, object]) -> float:
    """Expected fulfillment rate: bin-midpoint expectation of slo_rate under
    the evidence, computed on the Markov blanket of slo_rate. Numeric
    evidence off the trained support clamps to the nearest seen state below."""
    kept: dict[str, object] = {}
    for var, value in evidence.items():
        if not model.has_variable(var) or var == "slo_rate":
            continue
        spec = model.variable(var)
        if isinstance(value, (int, float)) and value not in spec.states:
            value = _clamp_numeric(spec, float(value))
        kept[var] = value
    blanket = markov_blanket(model, ["slo_rate"])
    kept = {k: v for k, v in kept.items() if k in blanket}
    order = [n for n in model.node_names if n in blanket and n != "slo_rate"]
    dist = variable_elimination(model, ["slo_rate"], kept, order)
    states = np.asarray(model.variable("slo_rate").states, dtype=np.float64)
    return float(np.dot(dist.values, states))


def reassign_clients(
    fog_model: BayesNet,
    n_clients: int,
    env: Mapping[str, Mapping[str, object]],
) -> dict[str, int]:
    """Greedy client placement, one client at a time.

    For each client, every device is probed at one stream beyond its current
    assignment; the client goes to the device with the strictly highest
    expected fulfillment, ties to the earliest-registered device (iteration
    order of ``env``).
    """
    if n_clients < 0:
        raise ValueError("n_clients must be >= 0")
    counts = {device: 0 for device in env}
    if not counts:
        raise ValueError("no devices to assign to")
    cache: dict[tuple[str, int], float] = {}
    for _ in range(n_clients):
        best_device = None
        best_delta = -1.0
        for device, device_env in env.items():
            probe = counts[device] + 1
            key = (device, probe)
            if key not in cache:
                evidence = dict(device_env)
                evidence["streams"] = probe
                cache[key] = expected_fulfillment(fog_model, evidence)
            if cache[key] > best_delta:
                best_delta = cache[key]
                best_device = device
        counts[best_device] += 1
    return counts


def write_fog_csv(history: Iterable[FogMetricsRow], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FOG_COLUMNS)
        for row in history:
            writer.writerow([row.slo_rate, row.device_type, row.congestion, row.streams])


def read_fog_csv(path: str | Path) -> list[FogMetricsRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        return [
            FogMetricsRow(
                slo_rate=float(r["slo_rate"]),
                device_type=r["device_type"],
                congestion=float(r["congestion"]),
                streams=int(r["streams"]),
            )
            for r in reader
        ]
