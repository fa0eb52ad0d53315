from .io import read_events, write_events
from .stream import Event, EventStream, ExposureWindow
from .voxel import (SubVoxelGridSet, VoxelGrid, build_voxel_grid,
                    pair_exposure_grids, partition_voxel_grid)

__all__ = [
    "Event", "EventStream", "ExposureWindow",
    "VoxelGrid", "SubVoxelGridSet",
    "build_voxel_grid", "partition_voxel_grid", "pair_exposure_grids",
    "read_events", "write_events",
]
