"""Pure NumPy implementations of the hot event-processing kernels.

This is the fallback backend used when the compiled extension is not
available (or when ``EVDEBLUR_BACKEND=pure`` is set). Both backends keep
the floating-point expressions identical, operation by operation, so
their outputs agree bit for bit.
"""

import numpy as np


def splat_events(t, x, y, p, t0, t1, bins, height, width):
    """Accumulate events into a temporal-bin grid with bilinear splatting.

    Each event at normalized time ``tau = (t - t0) / (t1 - t0) * (bins - 1)``
    deposits weight ``p * (1 - |tau - b|)`` into every bin ``b`` with
    ``|tau - b| < 1`` at its (integer) pixel. Returns a float64 array of
    shape (bins, height, width).
    """
    grid = np.zeros((bins, height, width), dtype=np.float64)
    if t.size == 0:
        return grid
    if bins == 1:
        np.add.at(grid, (np.zeros(t.size, dtype=np.int64), y, x), p)
        return grid
    tau = (t - t0) / (t1 - t0) * (bins - 1)
    b0 = np.floor(tau)
    frac = tau - b0
    b0 = b0.astype(np.int64)
    np.add.at(grid, (b0, y, x), p * (1.0 - frac))
    right = b0 + 1 < bins
    np.add.at(grid, (b0[right] + 1, y[right], x[right]), p[right] * frac[right])
    return grid


def simulate_crossings(logl, times, thresholds):
    """Emit threshold-crossing events from a piecewise-linear log signal.

    ``logl`` has shape (T, H, W) with per-pixel log values at the instants
    ``times`` (strictly increasing; the first and last entries bound the
    simulated interval). Each pixel keeps a reference level, initialized to
    its first sample; whenever the linearly interpolated signal moves a full
    threshold ``c`` away from the reference, one event is emitted at the
    interpolated crossing time and the reference advances by ``c`` in that
    direction.

    Returns ``(t, x, y, p)`` arrays in generation order (unsorted).
    """
    ref = logl[0].copy()
    out_t, out_x, out_y, out_p = [], [], [], []
    for j in range(len(times) - 1):
        l0 = logl[j]
        l1 = logl[j + 1]
        seg_t0 = times[j]
        seg_t1 = times[j + 1]
        d = l1 - ref
        pol = np.sign(d)
        n = np.floor(np.abs(d) / thresholds)
        yy, xx = np.nonzero(n)
        if yy.size == 0:
            continue
        cnt = n[yy, xx].astype(np.int64)
        total = int(cnt.sum())
        y_ev = np.repeat(yy, cnt)
        x_ev = np.repeat(xx, cnt)
        # per-pixel crossing index 1..cnt
        idx = (np.arange(total, dtype=np.int64)
               - np.repeat(np.cumsum(cnt) - cnt, cnt) + 1)
        c_ev = thresholds[y_ev, x_ev]
        pol_ev = pol[y_ev, x_ev]
        lev = ref[y_ev, x_ev] + idx * c_ev * pol_ev
        t_ev = seg_t0 + (lev - l0[y_ev, x_ev]) / (l1[y_ev, x_ev] - l0[y_ev, x_ev]) * (seg_t1 - seg_t0)
        out_t.append(t_ev)
        out_x.append(x_ev)
        out_y.append(y_ev)
        out_p.append(pol_ev)
        ref[yy, xx] = ref[yy, xx] + pol[yy, xx] * n[yy, xx] * thresholds[yy, xx]
    if not out_t:
        empty_f = np.empty(0, dtype=np.float64)
        empty_i = np.empty(0, dtype=np.int64)
        return empty_f, empty_i, empty_i, empty_f
    return (np.concatenate(out_t),
            np.concatenate(out_x).astype(np.int64),
            np.concatenate(out_y).astype(np.int64),
            np.concatenate(out_p))
