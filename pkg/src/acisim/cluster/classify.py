"""Relative device classification.

Devices are ranked against the fleet they are in, not against absolute
numbers: CPU capability maps onto integer ranks 1..4, GPU capability onto
0..2 (0 reserved for devices without a GPU), and the combined capacity
scalar is their sum. Because the ranking is relative it must be recomputed
whenever fleet membership changes.
"""

from __future__ import annotations

from typing import Iterable

from ..sim.workload import DeviceProfile

__all__ = ["classify_devices"]

CPU_RANGE = (1, 4)
GPU_RANGE = (1, 2)


def _spread(values: Iterable[float], lo: int, hi: int) -> dict[float, int]:
    """Map distinct values, by rank, evenly onto the integers [lo, hi]."""
    distinct = sorted(set(values))
    if len(distinct) == 1:
        return {distinct[0]: lo}
    span = len(distinct) - 1
    scale = (hi - lo) / span
    # int(x + 0.5): round half up, independent of the platform rounding mode
    return {v: int(lo + scale * rank + 0.5) for rank, v in enumerate(distinct)}


def classify_devices(
    profiles: Iterable[DeviceProfile],
) -> dict[str, tuple[int, int, int]]:
    """Rank the fleet; returns id -> (cpu rank p, gpu rank g, capacity dc).

    Raw CPU throughput ranks onto [1,4]. The raw GPU signal ranks onto [1,2]
    with 0 kept for GPU-less devices. dc = p + g. Ties share a rank, and the
    result is invariant under reordering of the fleet.
    """
    fleet = list(profiles)
    if not fleet:
        raise ValueError("no profiles to classify")
    cpu_rank = _spread((p.throughput for p in fleet), *CPU_RANGE)
    gpu_values = [p.g for p in fleet if p.g > 0]
    gpu_rank = _spread(gpu_values, *GPU_RANGE) if gpu_values else {}
    out = {}
    for prof in fleet:
        p = cpu_rank[prof.throughput]
        g = gpu_rank[prof.g] if prof.g > 0 else 0
        out[prof.id] = (p, g, p + g)
    return out
