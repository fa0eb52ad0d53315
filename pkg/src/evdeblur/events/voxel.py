"""Voxel-grid embedding of event streams.

A stream is discretized into a (bins, H, W) tensor: each event's
normalized time splats bilinearly onto the two nearest temporal bins at
its pixel, signed by polarity. The grid can be partitioned channel-wise
into equal sub-grids covering consecutive slices of the exposure.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from .._kernels import splat_events
from .stream import EventStream


@dataclass
class VoxelGrid:
    """Real (bins, H, W) tensor embedding of one event stream."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 3:
            raise ValueError("voxel grid data must be (bins, height, width)")
        if not np.all(np.isfinite(self.data)):
            raise ValueError("voxel grid entries must be finite")

    @property
    def bins(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]


@dataclass
class SubVoxelGridSet:
    """Ordered channel partition of a voxel grid; concatenation restores it."""

    parts: List[np.ndarray]

    def concat(self) -> np.ndarray:
        return np.concatenate(self.parts, axis=0)


def build_voxel_grid(stream: EventStream, bins: int, height: int, width: int,
                     normalize: bool = False) -> VoxelGrid:
    """Embed an event stream into a (bins, height, width) voxel grid.

    Each event at normalized time ``tau = (t - t0)/(t1 - t0) * (bins - 1)``
    contributes weight ``(1 - |tau - b|) * p`` to every bin ``b`` with
    ``|tau - b| < 1`` at its pixel; spatial placement is nearest-pixel. The
    grid total therefore equals the stream's signed polarity sum. With
    ``normalize`` the grid is divided by its max absolute value (if any).
    """
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if stream.window.duration <= 0:
        raise ValueError("exposure window has no duration")
    if len(stream) > 0:
        if stream.x.max() >= width or stream.y.max() >= height:
            raise ValueError("event coordinates out of range for the requested grid size")
    data = splat_events(stream.t, stream.x, stream.y,
                        stream.p.astype(np.float64),
                        stream.window.t_start, stream.window.t_end,
                        bins, height, width)
    if normalize:
        peak = np.abs(data).max()
        if peak > 0:
            data = data / peak
    return VoxelGrid(data)


def partition_voxel_grid(grid: VoxelGrid, n_parts: int) -> SubVoxelGridSet:
    """Split a grid into n_parts consecutive channel slices of equal size."""
    if n_parts < 1:
        raise ValueError("n_parts must be >= 1")
    if grid.bins % n_parts != 0:
        raise ValueError(f"{n_parts} does not divide {grid.bins} bins")
    step = grid.bins // n_parts
    parts = [grid.data[i * step:(i + 1) * step] for i in range(n_parts)]
    return SubVoxelGridSet(parts)


def pair_exposure_grids(grid_m: VoxelGrid, grid_m_plus_1: VoxelGrid) -> np.ndarray:
    """Stack two consecutive exposure grids channel-wise, earlier first."""
    if grid_m.data.shape != grid_m_plus_1.data.shape:
        raise ValueError(
            f"grid shapes differ: {grid_m.data.shape} vs {grid_m_plus_1.data.shape}"
        )
    return np.concatenate([grid_m.data, grid_m_plus_1.data], axis=0)
