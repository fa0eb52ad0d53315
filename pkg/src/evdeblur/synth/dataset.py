"""Dataset builder: (blurred frame, event stream, sharp target) triplets.

On-disk layout under a dataset root:

    <root>/<seq>/sharp/%06d.png      sharp frames, renumbered from 0
    <root>/<seq>/blur/%06d.png       one blurred frame per exposure window
    <root>/<seq>/events/%06d.evt     matching event stream per window
    <root>/index.json                manifest listing windows and samples

A sample groups 2P+1 consecutive exposure windows; its ground truth is
the center sharp frame of the center window.
"""

import json
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np

from ..events.io import read_events, write_events
from ..events.stream import EventStream, ExposureWindow
from ..imgio import load_image, save_image
from .blur import synthesize_blur
from .simulate import SharpSequence, sample_threshold_field, simulate_events

MANIFEST_NAME = "index.json"


@dataclass
class SequenceSample:
    """One training sample: 2P+1 blur/event pairs plus the sharp target."""

    blur_frames: List[np.ndarray]
    event_streams: List[EventStream]
    sharp_target: np.ndarray
    windows: List[ExposureWindow]
    sample_id: str = ""

    def __post_init__(self):
        n = len(self.blur_frames)
        if not (len(self.event_streams) == len(self.windows) == n):
            raise ValueError("blur frames, event streams and windows must align")


def _sequence_dirs(sharp_dir: Path):
    """Yield (name, frame paths) per sequence under sharp_dir.

    Accepts either a directory of sequence subdirectories (each holding a
    ``sharp/`` folder or loose PNGs) or a single directory of PNGs.
    """
    pngs = sorted(sharp_dir.glob("*.png"))
    if pngs:
        yield sharp_dir.name, pngs
        return
    found = False
    for sub in sorted(p for p in sharp_dir.iterdir() if p.is_dir()):
        frames = sorted((sub / "sharp").glob("*.png")) or sorted(sub.glob("*.png"))
        if frames:
            found = True
            yield sub.name, frames
    if not found:
        raise FileNotFoundError(f"no PNG sequences found under {sharp_dir}")


def build_dataset(sharp_dir, out_dir, P: int = 2, blur_window_len: int = 7,
                  stride: int | None = None, fps: float = 240.0, seed: int = 0,
                  threshold_mu: float = 0.2, threshold_sigma: float = 0.03,
                  use_gamma: bool = False) -> dict:
    """Generate blur frames, event files and the manifest; returns the manifest.

    Exposure window ``w`` of a sequence averages sharp frames
    ``[w*stride, w*stride + blur_window_len)`` and spans the time between
    the first and last of those frames. Contrast thresholds are drawn once
    per pixel per sequence from N(mu, sigma^2), seeded deterministically
    from ``seed`` and the sequence name.
    """
    sharp_dir = Path(sharp_dir)
    out_dir = Path(out_dir)
    if P < 0:
        raise ValueError("P must be >= 0")
    if blur_window_len < 2:
        raise ValueError("blur_window_len must be >= 2 (a window needs duration)")
    stride = blur_window_len if stride is None else stride
    if stride < 1:
        raise ValueError("stride must be >= 1")

    manifest = {
        "version": 1,
        "P": P,
        "blur_window_len": blur_window_len,
        "stride": stride,
        "fps": fps,
        "seed": seed,
        "threshold_mu": threshold_mu,
        "threshold_sigma": threshold_sigma,
        "use_gamma": use_gamma,
        "sequences": {},
        "samples": [],
    }

    for seq_name, frame_paths in _sequence_dirs(sharp_dir):
        n_frames = len(frame_paths)
        if blur_window_len > n_frames:
            raise ValueError(
                f"sequence {seq_name}: window of {blur_window_len} frames "
                f"exceeds the {n_frames} available"
            )
        n_windows = (n_frames - blur_window_len) // stride + 1
        if n_windows < 2 * P + 1:
            raise ValueError(
                f"sequence {seq_name}: only {n_windows} windows, "
                f"need at least {2 * P + 1}"
            )

        frames = np.stack([load_image(p) for p in frame_paths])
        h, w = frames.shape[1:3]
        seq = SharpSequence(frames, fps)
        thresholds = sample_threshold_field(
            h, w, threshold_mu, threshold_sigma,
            seed=[seed, zlib.crc32(seq_name.encode())])

        seq_dir = out_dir / seq_name
        for name in ("sharp", "blur", "events"):
            (seq_dir / name).mkdir(parents=True, exist_ok=True)
        for i, src in enumerate(frame_paths):
            dst = seq_dir / "sharp" / f"{i:06d}.png"
            if src.resolve() != dst.resolve():
                save_image(frames[i], dst)

        windows = []
        for wi in range(n_windows):
            start = wi * stride
            stop = start + blur_window_len
            win = ExposureWindow(start / fps, (stop - 1) / fps, frame_index=wi)
            blur = synthesize_blur(frames[start:stop], use_gamma=use_gamma)
            save_image(blur, seq_dir / "blur" / f"{wi:06d}.png")
            stream = simulate_events(seq, thresholds, win)
            write_events(stream, seq_dir / "events" / f"{wi:06d}.evt")
            windows.append({
                "index": wi,
                "start_frame": start,
                "n_frames": blur_window_len,
                "t_start": win.t_start,
                "t_end": win.t_end,
            })

        manifest["sequences"][seq_name] = {
            "n_sharp": n_frames,
            "height": h,
            "width": w,
            "windows": windows,
        }
        for center in range(P, n_windows - P):
            start = center * stride
            manifest["samples"].append({
                "id": f"{seq_name}/{center:06d}",
                "sequence": seq_name,
                "center_window": center,
                "windows": list(range(center - P, center + P + 1)),
                "sharp_frame": start + blur_window_len // 2,
            })

    out_dir.mkdir(parents=True, exist_ok=True)
    write_manifest(manifest, out_dir / MANIFEST_NAME)
    return manifest


def write_manifest(manifest: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_manifest(path) -> dict:
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_sample(root, manifest: dict, sample: dict) -> SequenceSample:
    """Materialize one manifest sample from disk."""
    root = Path(root)
    seq_dir = root / sample["sequence"]
    seq_meta = manifest["sequences"][sample["sequence"]]
    blur_frames, streams, windows = [], [], []
    missing = [str(seq_dir / "blur" / f"{wi:06d}.png")
               for wi in sample["windows"]
               if not (seq_dir / "blur" / f"{wi:06d}.png").exists()]
    missing += [str(seq_dir / "events" / f"{wi:06d}.evt")
                for wi in sample["windows"]
                if not (seq_dir / "events" / f"{wi:06d}.evt").exists()]
    sharp_path = seq_dir / "sharp" / f"{sample['sharp_frame']:06d}.png"
    if not sharp_path.exists():
        missing.append(str(sharp_path))
    if missing:
        raise FileNotFoundError("missing sample files: " + ", ".join(missing))
    for wi in sample["windows"]:
        blur_frames.append(load_image(seq_dir / "blur" / f"{wi:06d}.png"))
        streams.append(read_events(seq_dir / "events" / f"{wi:06d}.evt"))
        meta = seq_meta["windows"][wi]
        windows.append(ExposureWindow(meta["t_start"], meta["t_end"], frame_index=wi))
    return SequenceSample(
        blur_frames=blur_frames,
        event_streams=streams,
        sharp_target=load_image(sharp_path),
        windows=windows,
        sample_id=sample["id"],
    )
