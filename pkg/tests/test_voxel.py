import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evdeblur.events.stream import EventStream, ExposureWindow
from evdeblur.events.voxel import (VoxelGrid, build_voxel_grid,
                                   pair_exposure_grids, partition_voxel_grid)

from conftest import random_stream


def voxel_oracle(stream, bins, height, width):
    """Independent per-event accumulation with explicit bin weights."""
    grid = np.zeros((bins, height, width))
    t0, t1 = stream.window.t_start, stream.window.t_end
    for e in stream:
        tau = 0.0 if bins == 1 else (e.t - t0) / (t1 - t0) * (bins - 1)
        for b in range(bins):
            w = 1.0 - abs(tau - b)
            if w > 0:
                grid[b, e.y, e.x] += e.p * w
    return grid


def test_empty_stream_gives_zero_grid():
    s = EventStream.empty(ExposureWindow(0.0, 1.0), 2, 2)
    g = build_voxel_grid(s, 4, 2, 2)
    assert g.data.shape == (4, 2, 2)
    assert np.all(g.data == 0)


def test_midway_event_splits_between_bins():
    # hand-evaluated: tau = 0.5 * (2 - 1) = 0.5 -> weights 0.5 / 0.5
    s = EventStream(ExposureWindow(0.0, 1.0), [0.5], [0], [0], [1], 2, 2)
    g = build_voxel_grid(s, 2, 2, 2)
    assert g.data[0, 0, 0] == 0.5
    assert g.data[1, 0, 0] == 0.5
    assert np.count_nonzero(g.data) == 2


def test_window_start_event_lands_fully_in_first_bin():
    s = EventStream(ExposureWindow(0.0, 1.0), [0.0], [1], [0], [-1], 2, 2)
    g = build_voxel_grid(s, 2, 2, 2)
    assert g.data[0, 0, 1] == -1.0
    assert np.all(g.data[1] == 0)


def test_single_bin_collects_all_mass():
    rng = np.random.default_rng(1)
    s = random_stream(rng, 64, 8, 8)
    g = build_voxel_grid(s, 1, 8, 8)
    assert g.data.shape == (1, 8, 8)
    np.testing.assert_allclose(g.data.sum(), s.polarity_sum(), rtol=1e-12)


def test_matches_bruteforce_oracle():
    rng = np.random.default_rng(7)
    for bins in (1, 2, 5, 16):
        s = random_stream(rng, 200, 16, 16)
        g = build_voxel_grid(s, bins, 16, 16)
        np.testing.assert_allclose(g.data, voxel_oracle(s, bins, 16, 16), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(0, 300), bins=st.sampled_from([1, 2, 4, 16]),
       seed=st.integers(0, 2**31))
def test_mass_conservation(n, bins, seed):
    s = random_stream(np.random.default_rng(seed), n, 16, 16)
    total = build_voxel_grid(s, bins, 16, 16).data.sum()
    expected = s.polarity_sum()
    assert abs(total - expected) <= 1e-4 * max(1.0, abs(expected))


def test_linearity_over_disjoint_streams():
    rng = np.random.default_rng(3)
    s = random_stream(rng, 120, 8, 8)
    even = EventStream(s.window, s.t[0::2], s.x[0::2], s.y[0::2], s.p[0::2], 8, 8)
    odd = EventStream(s.window, s.t[1::2], s.x[1::2], s.y[1::2], s.p[1::2], 8, 8)
    whole = build_voxel_grid(s, 8, 8, 8).data
    parts = build_voxel_grid(even, 8, 8, 8).data + build_voxel_grid(odd, 8, 8, 8).data
    np.testing.assert_allclose(whole, parts, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 200), bins=st.sampled_from([2, 4, 16]),
       seed=st.integers(0, 2**31))
def test_time_reversal_flips_bin_order(n, bins, seed):
    s = random_stream(np.random.default_rng(seed), n, 8, 8, t0=0.0, t1=1.0)
    rt = 1.0 - s.t[::-1]
    rs = EventStream(s.window, rt, s.x[::-1], s.y[::-1], s.p[::-1], 8, 8)
    fwd = build_voxel_grid(s, bins, 8, 8).data
    rev = build_voxel_grid(rs, bins, 8, 8).data
    np.testing.assert_allclose(rev, fwd[::-1], atol=1e-6)


def test_out_of_range_coordinates_rejected():
    s = random_stream(np.random.default_rng(0), 10, 16, 16)
    with pytest.raises(ValueError, match="out of range"):
        build_voxel_grid(s, 4, 8, 8)


def test_bins_must_be_positive():
    s = EventStream.empty(ExposureWindow(0.0, 1.0), 2, 2)
    with pytest.raises(ValueError, match="bins"):
        build_voxel_grid(s, 0, 2, 2)


def test_normalize_flag_bounds_magnitude():
    rng = np.random.default_rng(5)
    s = random_stream(rng, 500, 8, 8)
    g = build_voxel_grid(s, 4, 8, 8, normalize=True)
    assert np.abs(g.data).max() == pytest.approx(1.0)


def test_partition_round_trip_bit_exact():
    rng = np.random.default_rng(11)
    grid = VoxelGrid(rng.normal(size=(16, 4, 4)))
    parts = partition_voxel_grid(grid, 4)
    assert len(parts.parts) == 4
    assert all(p.shape == (4, 4, 4) for p in parts.parts)
    assert np.array_equal(parts.concat(), grid.data)


def test_partition_identity_and_all_divisors():
    rng = np.random.default_rng(12)
    grid = VoxelGrid(rng.normal(size=(16, 3, 5)))
    single = partition_voxel_grid(grid, 1)
    assert np.array_equal(single.parts[0], grid.data)
    for n in (1, 2, 4, 8, 16):
        assert np.array_equal(partition_voxel_grid(grid, n).concat(), grid.data)


def test_partition_requires_divisibility():
    grid = VoxelGrid(np.zeros((5, 2, 2)))
    with pytest.raises(ValueError, match="divide"):
        partition_voxel_grid(grid, 2)


def test_pair_concatenation_order():
    a = VoxelGrid(np.zeros((4, 2, 2)))
    b = VoxelGrid(np.ones((4, 2, 2)))
    pair = pair_exposure_grids(a, b)
    assert pair.shape == (8, 2, 2)
    assert np.all(pair[:4] == 0)
    assert np.all(pair[4:] == 1)


def test_pair_shape_mismatch():
    a = VoxelGrid(np.zeros((4, 2, 2)))
    b = VoxelGrid(np.zeros((8, 2, 2)))
    with pytest.raises(ValueError, match="shapes differ"):
        pair_exposure_grids(a, b)


def test_voxel_grid_rejects_non_finite():
    with pytest.raises(ValueError, match="finite"):
        VoxelGrid(np.array([[[np.nan]]]))
