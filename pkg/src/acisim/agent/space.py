"""Discrete configuration space of an agent.

A space is an ordered set of named numeric axes, each with a fixed grid of
admissible values. A configuration is a tuple holding one value per axis, in
axis order. Grids of per-configuration scores are stored as numpy arrays in
the space's shape, indexed by value position along each axis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np
from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator
from scipy.spatial import QhullError

__all__ = ["ParamSpace", "default_space", "interpolate_grid"]

Config = tuple


@dataclass(frozen=True)
class ParamSpace:
    """Ordered numeric axes, e.g. (("pixel", (120, ..., 480)), ...)."""

    axes: tuple[tuple[str, tuple[float, ...]], ...]

    def __post_init__(self) -> None:
        for name, values in self.axes:
            if len(values) == 0:
                raise ValueError(f"axis {name!r} has no values")
            if len(set(values)) != len(values):
                raise ValueError(f"axis {name!r} has duplicate values")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(values) for _, values in self.axes)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def values(self, name: str) -> tuple[float, ...]:
        for axis, vals in self.axes:
            if axis == name:
                return vals
        raise KeyError(name)

    def configs(self) -> Iterator[Config]:
        """All configurations, first axis slowest (C order)."""
        return itertools.product(*(vals for _, vals in self.axes))

    def index_of(self, config: Config) -> tuple[int, ...]:
        return tuple(
            vals.index(value) for (_, vals), value in zip(self.axes, config)
        )

    def as_evidence(self, config: Config) -> dict[str, float]:
        return dict(zip(self.names, config))

    def corner_configs(self) -> tuple[Config, ...]:
        """Configurations probed eagerly: grid extremes plus the axis cross.

        The cross is the all-midpoints configuration together with each
        single-axis extreme while the other axes sit at their midpoint.
        Midpoint means the middle grid value (even lengths round down).
        """
        lows = tuple(vals[0] for _, vals in self.axes)
        highs = tuple(vals[-1] for _, vals in self.axes)
        mids = tuple(vals[(len(vals) - 1) // 2] for _, vals in self.axes)

        seen: dict[Config, None] = {}
        for combo in itertools.product(*zip(lows, highs)):
            seen.setdefault(tuple(combo), None)
        seen.setdefault(mids, None)
        for i, (_, vals) in enumerate(self.axes):
            for extreme in (vals[0], vals[-1]):
                point = mids[:i] + (extreme,) + mids[i + 1 :]
                seen.setdefault(point, None)
        return tuple(seen)


def default_space() -> ParamSpace:
    return ParamSpace(
        (
            ("pixel", (120.0, 180.0, 240.0, 300.0, 360.0, 420.0, 480.0)),
            ("fps", (5.0, 10.0, 12.0, 14.0, 18.0)),
        )
    )


def interpolate_grid(
    space: ParamSpace, known: Mapping[Config, float]
) -> np.ndarray:
    """Fill a full grid from scores at a subset of configurations.

    Known points keep their exact value. Everything else is linearly
    interpolated, falling back to nearest-neighbour outside the convex hull
    of the known points (or everywhere when the known points are too few or
    too flat to triangulate). Interpolation runs in grid-index coordinates
    so axes with large value spans do not dominate the geometry.
    """
    if not known:
        raise ValueError("no known configurations to interpolate from")

    grid = np.empty(space.shape, dtype=np.float64)
    points = np.array(
        [space.index_of(cfg) for cfg in known], dtype=np.float64
    )
    scores = np.array([known[cfg] for cfg in known], dtype=np.float64)

    if len(known) == 1:
        grid.fill(scores[0])
        return grid

    mesh = np.array(
        list(itertools.product(*(range(n) for n in space.shape))),
        dtype=np.float64,
    )

    if len(space.axes) == 1:
        order = np.argsort(points[:, 0])
        grid[:] = np.interp(mesh[:, 0], points[order, 0], scores[order])
    else:
        nearest = NearestNDInterpolator(points, scores)
        filled = None
        try:
            linear = LinearNDInterpolator(points, scores)
            filled = linear(mesh)
        except QhullError:
            pass
        if filled is None:
            filled = nearest(mesh)
        else:
            holes = np.isnan(filled)
            if holes.any():
                filled[holes] = nearest(mesh[holes])
        grid[:] = filled.reshape(space.shape)

    for cfg, value in known.items():
        grid[space.index_of(cfg)] = value
    return grid
