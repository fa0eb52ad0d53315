"""Benchmark the compiled kernels against the pure NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--events 2000000] [--size 256]
       [--frames 24] [--repeats 3]

Both backends are run on identical inputs; outputs are checked for bit
equality before timings are reported.
"""

import argparse
import time

import numpy as np

from evdeblur._kernels import pure

try:
    from evdeblur._kernels import _native as native
except ImportError:
    native = None


def _time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def bench_splat(n_events, size, repeats):
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(0.0, 1.0, n_events))
    x = rng.integers(0, size, n_events)
    y = rng.integers(0, size, n_events)
    p = rng.choice([-1.0, 1.0], n_events)
    args = (t, x, y, p, 0.0, 1.0, 16, size, size)
    rows = []
    t_pure, ref = _time(lambda: pure.splat_events(*args), repeats)
    rows.append(("pure", t_pure))
    if native is not None:
        t_nat, out = _time(lambda: native.splat_events(*args), repeats)
        assert np.array_equal(ref, out), "backend outputs diverged"
        rows.append(("native", t_nat))
    return rows


def bench_simulate(n_frames, size, repeats):
    rng = np.random.default_rng(1)
    drift = rng.normal(0, 0.25, (n_frames, size, size))
    logl = np.ascontiguousarray(drift.cumsum(axis=0))
    times = np.linspace(0.0, 1.0, n_frames)
    thresholds = np.ascontiguousarray(rng.uniform(0.15, 0.25, (size, size)))
    rows = []
    t_pure, ref = _time(lambda: pure.simulate_crossings(logl, times, thresholds),
                        repeats)
    rows.append(("pure", t_pure, len(ref[0])))
    if native is not None:
        t_nat, out = _time(lambda: native.simulate_crossings(logl, times, thresholds),
                           repeats)
        order_ref = np.lexsort((ref[3], ref[1], ref[2], ref[0]))
        order_out = np.lexsort((out[3], out[1], out[2], out[0]))
        assert all(np.array_equal(ref[k][order_ref], out[k][order_out])
                   for k in range(4)), "backend outputs diverged"
        rows.append(("native", t_nat, len(out[0])))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--events", type=int, default=2_000_000)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--frames", type=int, default=24)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if native is None:
        print("compiled extension not importable; timing the fallback only\n")

    print(f"voxel splat: {args.events} events -> 16x{args.size}x{args.size}")
    splat = bench_splat(args.events, args.size, args.repeats)
    base = splat[0][1]
    for name, t in splat:
        print(f"  {name:>8}: {t * 1e3:8.1f} ms   ({base / t:4.1f}x)")

    print(f"event simulation: {args.frames} frames at {args.size}x{args.size}")
    sim = bench_simulate(args.frames, args.size, args.repeats)
    base = sim[0][1]
    for name, t, n in sim:
        print(f"  {name:>8}: {t * 1e3:8.1f} ms   ({base / t:4.1f}x, {n} events)")


if __name__ == "__main__":
    main()
