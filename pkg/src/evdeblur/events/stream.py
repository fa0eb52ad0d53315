"""Event streams and exposure windows.

An event is a (timestamp, x, y, polarity) record emitted by an event
camera when the log brightness at a pixel changes by one contrast
threshold. An :class:`EventStream` holds all events that fall inside one
frame's exposure window, stored as flat arrays for speed.
"""

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np


@dataclass(frozen=True)
class Event:
    """One brightness-change record: time (s), column, row, polarity (+1/-1)."""

    t: float
    x: int
    y: int
    p: int


@dataclass(frozen=True)
class ExposureWindow:
    """Time interval [t_start, t_end] during which one frame integrates light.

    ``frame_index`` ties the window to its frame in a sequence; it is
    bookkeeping only and not part of stream identity.
    """

    t_start: float
    t_end: float
    frame_index: int = 0

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError(
                f"exposure window must have positive duration, got "
                f"[{self.t_start}, {self.t_end}]"
            )

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


class EventStream:
    """Time-sorted events within one exposure window on an H x W sensor.

    Construction validates every invariant: timestamps sorted ascending and
    inside the window, polarities in {+1, -1}, coordinates inside the
    sensor. Events are stored as arrays (``t`` float64, ``x``/``y`` int64,
    ``p`` int64); iteration yields :class:`Event` records.
    """

    def __init__(self, window: ExposureWindow, t, x, y, p, height: int, width: int):
        self.window = window
        self.height = int(height)
        self.width = int(width)
        self.t = np.ascontiguousarray(np.asarray(t, dtype=np.float64).reshape(-1))
        self.x = np.ascontiguousarray(np.asarray(x, dtype=np.int64).reshape(-1))
        self.y = np.ascontiguousarray(np.asarray(y, dtype=np.int64).reshape(-1))
        self.p = np.ascontiguousarray(np.asarray(p, dtype=np.int64).reshape(-1))
        n = self.t.size
        if not (self.x.size == self.y.size == self.p.size == n):
            raise ValueError("event arrays must have equal length")
        if self.height <= 0 or self.width <= 0:
            raise ValueError("sensor dimensions must be positive")
        if n == 0:
            return
        if np.any(np.diff(self.t) < 0):
            raise ValueError("event timestamps must be sorted ascending")
        if self.t[0] < window.t_start or self.t[-1] > window.t_end:
            raise ValueError("event timestamps must lie inside the exposure window")
        if not np.all(np.abs(self.p) == 1):
            raise ValueError("polarity must be +1 or -1")
        if (self.x.min() < 0 or self.x.max() >= self.width
                or self.y.min() < 0 or self.y.max() >= self.height):
            raise ValueError("event coordinates out of sensor bounds")

    @classmethod
    def empty(cls, window: ExposureWindow, height: int, width: int) -> "EventStream":
        z = np.empty(0)
        return cls(window, z, z, z, z, height, width)

    @classmethod
    def from_events(cls, window: ExposureWindow, events: Sequence[Event],
                    height: int, width: int) -> "EventStream":
        t = [e.t for e in events]
        x = [e.x for e in events]
        y = [e.y for e in events]
        p = [e.p for e in events]
        return cls(window, t, x, y, p, height, width)

    def __len__(self) -> int:
        return self.t.size

    def __iter__(self) -> Iterator[Event]:
        for i in range(len(self)):
            yield Event(float(self.t[i]), int(self.x[i]), int(self.y[i]), int(self.p[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventStream):
            return NotImplemented
        return (self.window.t_start == other.window.t_start
                and self.window.t_end == other.window.t_end
                and self.height == other.height
                and self.width == other.width
                and np.array_equal(self.t, other.t)
                and np.array_equal(self.x, other.x)
                and np.array_equal(self.y, other.y)
                and np.array_equal(self.p, other.p))

    def __repr__(self) -> str:
        return (f"EventStream({len(self)} events, "
                f"[{self.window.t_start:.6f}, {self.window.t_end:.6f}], "
                f"{self.height}x{self.width})")

    def polarity_sum(self) -> float:
        """Signed event count; the mass a voxel embedding must conserve."""
        return float(self.p.sum())
