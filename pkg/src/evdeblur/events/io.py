"""Plain-text event file format.

Line 1:  ``# events v1 H=<int> W=<int> t0=<float> t1=<float>``
Then one event per line, ``t x y p``, space separated, sorted by t, with
t printed positionally at full round-trip precision (at least six decimal
digits) and p written as ``+1`` or ``-1``. Reading back a written file
reproduces the stream exactly at the printed precision.
"""

import os

import numpy as np

from .stream import EventStream, ExposureWindow

_HEADER_PREFIX = "# events v1 "


def _fmt(value: float) -> str:
    # shortest positional repr that parses back exactly, zero-padded to
    # at least six decimal digits
    text = np.format_float_positional(float(value), unique=True, trim="0")
    head, _, frac = text.partition(".")
    return f"{head}.{frac.ljust(6, '0')}"


def write_events(stream: EventStream, path) -> None:
    lines = [f"# events v1 H={stream.height} W={stream.width} "
             f"t0={_fmt(stream.window.t_start)} t1={_fmt(stream.window.t_end)}"]
    for i in range(len(stream)):
        p = "+1" if stream.p[i] > 0 else "-1"
        lines.append(f"{_fmt(stream.t[i])} {stream.x[i]} {stream.y[i]} {p}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_header(line: str):
    if not line.startswith(_HEADER_PREFIX):
        raise ValueError("line 1: missing '# events v1' header")
    fields = dict(part.split("=", 1) for part in line[len(_HEADER_PREFIX):].split()
                  if "=" in part)
    try:
        return (int(fields["H"]), int(fields["W"]),
                float(fields["t0"]), float(fields["t1"]))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"line 1: malformed header ({exc})") from exc


def read_events(path) -> EventStream:
    """Parse an event file; raises ValueError naming the offending line."""
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        height, width, t0, t1 = _parse_header(first)
        ts, xs, ys, ps = [], [], [], []
        last_t = None
        for lineno, raw in enumerate(fh, start=2):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 't x y p', got {line!r}")
            try:
                t = float(parts[0])
                x = int(parts[1])
                y = int(parts[2])
                p = int(parts[3])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
            if p not in (1, -1):
                raise ValueError(f"line {lineno}: polarity must be +1 or -1, got {p}")
            if not (t0 <= t <= t1):
                raise ValueError(f"line {lineno}: timestamp {t} outside window [{t0}, {t1}]")
            if not (0 <= x < width and 0 <= y < height):
                raise ValueError(f"line {lineno}: coordinates ({x}, {y}) out of bounds")
            if last_t is not None and t < last_t:
                raise ValueError(f"line {lineno}: timestamps not sorted ascending")
            last_t = t
            ts.append(t)
            xs.append(x)
            ys.append(y)
            ps.append(p)
    window = ExposureWindow(t0, t1)
    return EventStream(window, ts, xs, ys, ps, height, width)


def event_file_name(index: int) -> str:
    return f"{index:06d}.evt"


def write_events_atomic(stream: EventStream, path) -> None:
    """Write via a temp file and rename, so readers never see partial files."""
    tmp = f"{path}.tmp"
    write_events(stream, tmp)
    os.replace(tmp, path)
