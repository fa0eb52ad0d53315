"""Contrast-threshold event simulation from sharp frame sequences.

Per pixel, the log luminance is piecewise linear in time between frames.
An event of polarity sign(dL) fires each time the signal moves a full
contrast threshold away from the pixel's reference level, at the linearly
interpolated crossing time; the reference then advances to the crossed
level. Thresholds are Gaussian per pixel, redrawn once per sequence.
"""

from dataclasses import dataclass

import numpy as np

from .._kernels import simulate_crossings
from ..events.stream import EventStream, ExposureWindow
from .blur import GAMMA

LOG_EPS = 1e-4
THRESHOLD_FLOOR = 0.01
REC601 = np.array([0.299, 0.587, 0.114])


@dataclass
class SharpSequence:
    """High-frame-rate sharp frames in [0, 1] with their frame rate."""

    frames: np.ndarray  # (T, H, W) or (T, H, W, 3)
    fps: float

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim not in (3, 4):
            raise ValueError("frames must be (T, H, W) or (T, H, W, 3)")
        if self.fps <= 0:
            raise ValueError("fps must be positive")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.frames.shape[0], dtype=np.float64) / self.fps

    @property
    def duration(self) -> float:
        return (self.frames.shape[0] - 1) / self.fps


@dataclass
class ThresholdField:
    """Per-pixel contrast thresholds, all strictly positive."""

    c: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.float64)
        if self.c.ndim != 2:
            raise ValueError("threshold field must be 2-D")
        if not np.all(self.c > 0):
            raise ValueError("contrast thresholds must be positive")


def sample_threshold_field(height: int, width: int, mu: float = 0.2,
                           sigma: float = 0.03, seed: int = 0) -> ThresholdField:
    """Draw i.i.d. Gaussian thresholds, clamped below at 0.01."""
    if height <= 0 or width <= 0:
        raise ValueError("field dimensions must be positive")
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    rng = np.random.default_rng(seed)
    c = rng.normal(mu, sigma, size=(height, width))
    return ThresholdField(np.maximum(c, THRESHOLD_FLOOR))


def log_luminance(frames: np.ndarray) -> np.ndarray:
    """Log luminance of a frame stack.

    RGB frames are linearized with exponent 2.2 and reduced with Rec.601
    weights; single-channel frames are taken as linear intensity directly.
    A 1e-4 offset keeps the log finite at black pixels.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim == 4:
        lum = np.power(frames, GAMMA) @ REC601
    else:
        lum = frames
    return np.log(lum + LOG_EPS)


def simulate_events(seq: SharpSequence, thresholds: ThresholdField,
                    window: ExposureWindow) -> EventStream:
    """Simulate the event stream of one exposure window.

    The crossing time of level ``lev`` inside a frame interval
    ``[ta, tb]`` with endpoint log values ``La, Lb`` is
    ``ta + (lev - La) / (Lb - La) * (tb - ta)``; crossed levels step by
    one threshold from the reference, which starts at the window-opening
    log value. Events come out sorted by (t, y, x).
    """
    times = seq.times
    h, w = seq.frames.shape[1:3]
    if thresholds.c.shape != (h, w):
        raise ValueError("threshold field shape does not match frames")
    if window.t_start < times[0] - 1e-12 or window.t_end > times[-1] + 1e-12:
        raise ValueError(
            f"window [{window.t_start}, {window.t_end}] outside sequence span "
            f"[{times[0]}, {times[-1]}]"
        )
    logl = log_luminance(seq.frames)

    # trajectory sampled at the window bounds plus interior frame times
    lo = int(np.searchsorted(times, window.t_start, side="right"))
    hi = int(np.searchsorted(times, window.t_end, side="left"))
    knot_times = [window.t_start] + list(times[lo:hi]) + [window.t_end]
    knots = [_interp_frame(logl, times, window.t_start)]
    knots.extend(logl[lo:hi])
    knots.append(_interp_frame(logl, times, window.t_end))

    t, x, y, p = simulate_crossings(
        np.ascontiguousarray(np.stack(knots)),
        np.asarray(knot_times, dtype=np.float64),
        thresholds.c,
    )
    order = np.lexsort((p, x, y, t))
    return EventStream(window, t[order], x[order], y[order],
                       p[order].astype(np.int64), h, w)


def _interp_frame(logl: np.ndarray, times: np.ndarray, t: float) -> np.ndarray:
    """Linearly interpolate the log-luminance stack at time t."""
    j = int(np.clip(np.searchsorted(times, t, side="right") - 1, 0, len(times) - 2))
    ta, tb = times[j], times[j + 1]
    if t == ta:
        return logl[j]
    frac = (t - ta) / (tb - ta)
    return logl[j] * (1.0 - frac) + logl[j + 1] * frac
