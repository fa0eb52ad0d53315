import numpy as np
import pytest

from evdeblur.events.stream import Event, EventStream, ExposureWindow


def test_window_requires_positive_duration():
    with pytest.raises(ValueError, match="duration"):
        ExposureWindow(1.0, 1.0)
    with pytest.raises(ValueError, match="duration"):
        ExposureWindow(2.0, 1.0)
    assert ExposureWindow(0.0, 0.5).duration == 0.5


def test_empty_stream():
    s = EventStream.empty(ExposureWindow(0.0, 1.0), 4, 4)
    assert len(s) == 0
    assert s.polarity_sum() == 0


def test_from_events_round_trip():
    win = ExposureWindow(0.0, 1.0)
    events = [Event(0.1, 1, 2, 1), Event(0.5, 3, 0, -1), Event(0.9, 0, 0, 1)]
    s = EventStream.from_events(win, events, 3, 4)
    assert list(s) == events
    assert s.polarity_sum() == 1


def test_unsorted_timestamps_rejected():
    win = ExposureWindow(0.0, 1.0)
    with pytest.raises(ValueError, match="sorted"):
        EventStream(win, [0.5, 0.2], [0, 0], [0, 0], [1, 1], 4, 4)


def test_out_of_window_rejected():
    win = ExposureWindow(0.0, 1.0)
    with pytest.raises(ValueError, match="window"):
        EventStream(win, [1.5], [0], [0], [1], 4, 4)
    with pytest.raises(ValueError, match="window"):
        EventStream(win, [-0.1], [0], [0], [1], 4, 4)


def test_polarity_validated():
    win = ExposureWindow(0.0, 1.0)
    with pytest.raises(ValueError, match="polarity"):
        EventStream(win, [0.5], [0], [0], [0], 4, 4)
    with pytest.raises(ValueError, match="polarity"):
        EventStream(win, [0.5], [0], [0], [2], 4, 4)


def test_bounds_validated():
    win = ExposureWindow(0.0, 1.0)
    with pytest.raises(ValueError, match="bounds"):
        EventStream(win, [0.5], [4], [0], [1], 4, 4)
    with pytest.raises(ValueError, match="bounds"):
        EventStream(win, [0.5], [0], [-1], [1], 4, 4)


def test_boundary_timestamps_allowed():
    win = ExposureWindow(0.0, 1.0)
    s = EventStream(win, [0.0, 1.0], [0, 1], [0, 1], [1, -1], 4, 4)
    assert len(s) == 2


def test_equality_ignores_frame_index():
    a = EventStream(ExposureWindow(0.0, 1.0, frame_index=0), [0.5], [1], [1], [1], 4, 4)
    b = EventStream(ExposureWindow(0.0, 1.0, frame_index=7), [0.5], [1], [1], [1], 4, 4)
    c = EventStream(ExposureWindow(0.0, 1.0), [0.5], [1], [1], [-1], 4, 4)
    assert a == b
    assert a != c


def test_arrays_cast_to_canonical_dtypes():
    s = EventStream(ExposureWindow(0.0, 1.0), np.array([0.25], np.float32),
                    [1], [2], [1], 4, 4)
    assert s.t.dtype == np.float64
    assert s.x.dtype == np.int64 and s.p.dtype == np.int64
