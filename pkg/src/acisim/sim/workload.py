"""Synthetic video-processing workload.

Stands in for a real detection pipeline: given a device profile, a
configuration (pixel, fps) and the environment (streams, congestion, blur),
it emits batches of metric rows with a fixed, documented generative model:

    work        = pixel * fps * streams          (work units per second)
    effective   = throughput * (1 + g)           (work units per ms)
    bitrate     = pixel * fps
    network     = bitrate * streams * BYTES_PER_PIXEL      (MB/s, exact)
    delay       = work / effective + congestion + noise    (ms per frame)
    cpu         = clamp(work / (effective * CPU_HEADROOM) + noise, 0, 1)
    memory      = base + per-stream cost + noise           (utilization)
    consumption = base + work cost + noise                 (watts)
    success     ~ Bernoulli(sigmoid((pixel - center - blur shift) / slope))
    distance    = (DISTANCE_SCALE / fps) * uniform noise

All noise is bounded uniform from a counter-based generator keyed by
(device seed, round), so identical calls reproduce identical batches and no
global random state is involved. Expected delay grows with streams and
congestion, network grows with bitrate*streams, success falls with blur.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..agent.slo import SloSpec

__all__ = [
    "BYTES_PER_PIXEL",
    "DeviceProfile",
    "EnvState",
    "MetricsRow",
    "ScenarioEvent",
    "METRIC_COLUMNS",
    "make_fleet",
    "generate_batch",
    "apply_event",
    "load_events",
    "save_events",
    "write_metrics_csv",
    "read_metrics_csv",
]

BYTES_PER_PIXEL = 4e-5
SUCCESS_CENTER = 240.0
SUCCESS_SLOPE = 15.0
BLUR_CENTER_SHIFT = 30.0
DISTANCE_SCALE = 480.0
DISTANCE_SPREAD = (0.75, 1.45)
DELAY_NOISE_SPAN = 6.0
CPU_HEADROOM = 80.0

METRIC_COLUMNS = (
    "pixel",
    "fps",
    "bitrate",
    "cpu",
    "memory",
    "streams",
    "consumption",
    "network",
    "delay",
    "success",
    "distance",
)


@dataclass(frozen=True)
class DeviceProfile:
    """A device's capability: raw throughput plus assigned rank scalars."""

    id: str
    p: int
    g: int
    throughput: float
    noise: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.p < 1 or self.g < 0:
            raise ValueError("rank scalars out of range")
        if self.throughput <= 0:
            raise ValueError("throughput must be positive")

    @property
    def effective_throughput(self) -> float:
        return self.throughput * (1 + self.g)

    @property
    def dc(self) -> int:
        return self.p + self.g


@dataclass(frozen=True)
class EnvState:
    streams: int = 3
    congestion: float = 0.0
    blur: float = 0.0

    def __post_init__(self) -> None:
        if self.streams < 0:
            raise ValueError("streams must be >= 0")


@dataclass(frozen=True)
class MetricsRow:
    pixel: float
    fps: float
    bitrate: float
    cpu: float
    memory: float
    streams: int
    consumption: float
    network: float
    delay: float
    success: bool
    distance: float


@dataclass(frozen=True)
class ScenarioEvent:
    """A scripted disturbance applied at the start of a round."""

    at_round: int
    kind: str
    value: object = None

    _KINDS = ("stream_change", "blur", "slo_change", "congestion")

    def __post_init__(self) -> None:
        if self.at_round < 1:
            raise ValueError("at_round must be >= 1")
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")


def make_fleet() -> tuple[DeviceProfile, ...]:
    """The default heterogeneous fleet, ordered by registration."""
    return (
        DeviceProfile("laptop", 4, 0, 220.0, seed=11),
        DeviceProfile("orin", 3, 2, 173.0, seed=12),
        DeviceProfile("nano", 1, 0, 45.0, seed=13),
        DeviceProfile("xavier_cpu", 2, 0, 75.0, seed=14),
        DeviceProfile("xavier_gpu", 2, 1, 75.0, seed=15),
    )


def _rng(profile: DeviceProfile, round_index: int) -> np.random.Generator:
    key = np.array([profile.seed, round_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def generate_batch(
    profile: DeviceProfile,
    config: Sequence[float],
    env: EnvState,
    n: int,
    round_index: int,
) -> list[MetricsRow]:
    """Sample ``n`` metric rows for running ``config`` under ``env``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pixel, fps = float(config[0]), float(config[1])
    if fps < 1:
        raise ValueError("fps must be >= 1")

    rng = _rng(profile, round_index)
    effective = profile.effective_throughput
    work = pixel * fps * env.streams
    bitrate = pixel * fps
    network = bitrate * env.streams * BYTES_PER_PIXEL

    delay_noise = rng.uniform(0.0, DELAY_NOISE_SPAN * profile.noise, n)
    cpu_noise = rng.uniform(0.0, 0.05 * profile.noise, n)
    memory_noise = rng.uniform(0.0, 0.02 * profile.noise, n)
    power_noise = rng.uniform(0.0, 0.3 * profile.noise, n)
    success_draw = rng.uniform(0.0, 1.0, n)
    distance_draw = rng.uniform(*DISTANCE_SPREAD, n)

    center = SUCCESS_CENTER + BLUR_CENTER_SHIFT * env.blur
    p_success = 1.0 / (1.0 + math.exp(-(pixel - center) / SUCCESS_SLOPE))

    rows = []
    for i in range(n):
        rows.append(
            MetricsRow(
                pixel=pixel,
                fps=fps,
                bitrate=bitrate,
                cpu=float(
                    np.clip(work / (effective * CPU_HEADROOM) + cpu_noise[i], 0.0, 1.0)
                ),
                memory=float(
                    np.clip(0.25 + 0.04 * env.streams + memory_noise[i], 0.0, 1.0)
                ),
                streams=env.streams,
                consumption=1.5 + work / 10000.0 + float(power_noise[i]),
                network=network,
                delay=work / effective + env.congestion + float(delay_noise[i]),
                success=bool(success_draw[i] < p_success),
                distance=(DISTANCE_SCALE / fps) * float(distance_draw[i]),
            )
        )
    return rows


def apply_event(env: EnvState, event: ScenarioEvent) -> EnvState:
    """Fold an event into the environment; SLO changes are the caller's job."""
    if event.kind == "stream_change":
        return replace(env, streams=int(event.value))
    if event.kind == "blur":
        return replace(env, blur=float(event.value))
    if event.kind == "congestion":
        return replace(env, congestion=float(event.value))
    return env


def load_events(path: str | Path) -> tuple[ScenarioEvent, ...]:
    raw = json.loads(Path(path).read_text())
    events = []
    for entry in raw:
        value = entry.get("value")
        if entry["kind"] == "slo_change":
            value = SloSpec(
                value["name"],
                value["variable"],
                value["op"],
                value.get("value"),
                value.get("tier", "edge"),
                value.get("kind", "qos"),
            )
        events.append(ScenarioEvent(entry["at_round"], entry["kind"], value))
    return tuple(events)


def save_events(events: Iterable[ScenarioEvent], path: str | Path) -> None:
    doc = []
    for event in events:
        value = event.value
        if isinstance(value, SloSpec):
            value = {
                "name": value.name,
                "variable": value.variable,
                "op": value.op,
                "value": value.value,
                "tier": value.tier,
                "kind": value.kind,
            }
        doc.append({"at_round": event.at_round, "kind": event.kind, "value": value})
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def write_metrics_csv(rows: Iterable[MetricsRow], path: str | Path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(METRIC_COLUMNS)
        for row in rows:
            writer.writerow(
                [repr(getattr(row, col)) for col in METRIC_COLUMNS]
            )


def read_metrics_csv(path: str | Path) -> list[MetricsRow]:
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        rows = []
        for record in reader:
            rows.append(
                MetricsRow(
                    pixel=float(record["pixel"]),
                    fps=float(record["fps"]),
                    bitrate=float(record["bitrate"]),
                    cpu=float(record["cpu"]),
                    memory=float(record["memory"]),
                    streams=int(record["streams"]),
                    consumption=float(record["consumption"]),
                    network=float(record["network"]),
                    delay=float(record["delay"]),
                    success=record["success"] == "True",
                    distance=float(record["distance"]),
                )
            )
        return rows
