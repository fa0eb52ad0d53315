import numpy as np
import pytest
import torch

from evdeblur.events.stream import EventStream, ExposureWindow
from evdeblur.imgio import save_image
from evdeblur.synth.dataset import build_dataset
from evdeblur.synth.toy import render_toy_sequence

torch.set_num_threads(1)


def random_stream(rng, n_events, height=32, width=32, t0=0.0, t1=1.0) -> EventStream:
    t = np.sort(rng.uniform(t0, t1, n_events))
    x = rng.integers(0, width, n_events)
    y = rng.integers(0, height, n_events)
    p = rng.choice([-1, 1], n_events)
    return EventStream(ExposureWindow(t0, t1), t, x, y, p, height, width)


def zero_biases(module: torch.nn.Module):
    with torch.no_grad():
        for name, param in module.named_parameters():
            if name.endswith("bias"):
                param.zero_()
    return module


def zero_module(module: torch.nn.Module):
    with torch.no_grad():
        for param in module.parameters():
            param.zero_()
    return module


@pytest.fixture(scope="session")
def toy_dataset(tmp_path_factory):
    """Small three-sample dataset from one moving-texture sequence."""
    root = tmp_path_factory.mktemp("toydata")
    seq_dir = root / "src" / "seq0"
    seq_dir.mkdir(parents=True)
    frames = render_toy_sequence(n_frames=49, height=32, width=32, speed=1.0, seed=3)
    for i, frame in enumerate(frames):
        save_image(frame, seq_dir / f"{i:06d}.png")
    out = root / "ds"
    manifest = build_dataset(root / "src", out, P=2, blur_window_len=7, seed=11)
    return out, manifest


@pytest.fixture(scope="session")
def static_dataset(tmp_path_factory):
    """Dataset from a motionless sequence: blur equals sharp, no events."""
    root = tmp_path_factory.mktemp("staticdata")
    seq_dir = root / "src" / "seq0"
    seq_dir.mkdir(parents=True)
    frames = render_toy_sequence(n_frames=9, height=32, width=32, speed=0.0, seed=4)
    for i, frame in enumerate(frames):
        save_image(frame, seq_dir / f"{i:06d}.png")
    out = root / "ds"
    manifest = build_dataset(root / "src", out, P=1, blur_window_len=3, seed=11)
    return out, manifest
