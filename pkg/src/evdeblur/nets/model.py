"""Full deblurring network: per-frame fusion, pyramids, alignment, decoding.

The estimated sharp frame is the blurred target plus a decoded residual,
so a zero-initialized output conv reproduces the input exactly. All
per-frame and per-pair encoders are single instances applied in a loop,
which makes the parameter count independent of the frame radius P.
"""

import dataclasses

import numpy as np
import torch
import torch.nn.functional as F
from torch import nn

from ..config import NetConfig
from ..events.stream import EventStream
from ..events.voxel import build_voxel_grid
from .align import CascadeAligner
from .blocks import ConvResBlock, deconv4x4
from .intra import ConcatFusion, IntraFrameFusion
from .pyramid import EventPairEncoder, PyramidEncoder

CHECKPOINT_FORMAT = 1


class Decoder(nn.Module):
    """U-shaped decoder over the aligned pyramid with a residual 5x5 head."""

    def __init__(self, base_channels: int, out_channels: int = 3):
        super().__init__()
        b = base_channels
        self.bottom = ConvResBlock(4 * b, 4 * b)
        self.up1 = deconv4x4(4 * b, 2 * b)
        self.merge1 = ConvResBlock(4 * b, 2 * b)
        self.up0 = deconv4x4(2 * b, b)
        self.merge0 = ConvResBlock(2 * b, b)
        self.out_conv = nn.Conv2d(b, out_channels, 5, padding=2)

    def forward(self, aligned, target_frame):
        if len(aligned) != 3 or any(a is None for a in aligned):
            raise ValueError("decoder needs aligned features at all 3 scales")
        d2 = self.bottom(aligned[2])
        d1 = self.merge1(torch.cat([self.up1(d2), aligned[1]], dim=1))
        d0 = self.merge0(torch.cat([self.up0(d1), aligned[0]], dim=1))
        return target_frame + self.out_conv(d0)


class DeblurNet(nn.Module):
    """End-to-end event-guided video deblurring model."""

    def __init__(self, cfg: NetConfig):
        super().__init__()
        self.cfg = cfg
        b = cfg.base_channels
        self.shallow = ConvResBlock(3, b)
        if cfg.enable_intra_fusion:
            self.fuse = IntraFrameFusion(b, cfg.voxel_bins, cfg.fusion_iters)
        else:
            self.fuse = ConcatFusion(b, cfg.voxel_bins, cfg.fusion_iters)
        self.encoder = PyramidEncoder(b)
        if cfg.enable_align:
            self.pair_encoder = EventPairEncoder(2 * cfg.voxel_bins, b)
            self.aligner = CascadeAligner(b, cfg.dynamic_kernel)
        else:
            self.pair_encoder = None
            self.aligner = None
        self.decoder = Decoder(b)

    def forward(self, frames, voxels):
        """frames (B, 2P+1, 3, H, W) and voxels (B, 2P+1, bins, H, W) ->
        sharp estimate (B, 3, H, W). H and W must be multiples of 4."""
        n = self.cfg.n_frames
        if frames.dim() != 5 or voxels.dim() != 5:
            raise ValueError("frames and voxels must be 5-D batched tensors")
        if frames.shape[1] != n:
            raise ValueError(f"expected {n} frames (2P+1), got {frames.shape[1]}")
        if voxels.shape[1] != n:
            raise ValueError(f"expected {n} voxel grids, got {voxels.shape[1]}")
        if voxels.shape[2] != self.cfg.voxel_bins:
            raise ValueError(f"expected {self.cfg.voxel_bins} voxel bins, "
                             f"got {voxels.shape[2]}")
        if frames.shape[-2:] != voxels.shape[-2:]:
            raise ValueError("frames and voxels disagree on spatial size")
        h, w = frames.shape[-2:]
        if h % 4 or w % 4:
            raise ValueError(f"spatial size {h}x{w} must be a multiple of 4")

        radius = self.cfg.frame_radius
        fused = [self.fuse(self.shallow(frames[:, k]), voxels[:, k])
                 for k in range(n)]
        pyramids = [self.encoder(g) for g in fused]
        if self.aligner is not None:
            pairs = [self.pair_encoder(torch.cat([voxels[:, m], voxels[:, m + 1]], dim=1))
                     for m in range(n - 1)]
            aligned = self.aligner(pyramids, pairs)
        else:
            aligned = pyramids[radius]
        return self.decoder(aligned, frames[:, radius])


def param_count(cfg: NetConfig) -> int:
    """Total learnable scalars of a model built from ``cfg``."""
    return sum(p.numel() for p in DeblurNet(cfg).parameters())


def save_checkpoint(model: DeblurNet, path) -> None:
    torch.save({
        "format": CHECKPOINT_FORMAT,
        "config": dataclasses.asdict(model.cfg),
        "params": model.state_dict(),
    }, path)


def load_checkpoint(path) -> DeblurNet:
    """Rebuild a model from a checkpoint, validating its stored config."""
    blob = torch.load(path, map_location="cpu", weights_only=True)
    if blob.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"unsupported checkpoint format: {blob.get('format')!r}")
    try:
        cfg = NetConfig(**blob["config"])
    except TypeError as exc:
        raise ValueError(f"checkpoint config incompatible: {exc}") from exc
    model = DeblurNet(cfg)
    model.load_state_dict(blob["params"])
    return model


def pad_sample(blur_frames, streams, radius: int):
    """Replicate end frames/streams of a short, odd-length sample until it
    spans 2*radius+1 entries."""
    if len(blur_frames) != len(streams):
        raise ValueError("frame and stream counts differ")
    if len(blur_frames) % 2 == 0:
        raise ValueError("sample must have an odd number of frames")
    n = 2 * radius + 1
    if len(blur_frames) > n:
        raise ValueError(f"sample has {len(blur_frames)} frames, model takes {n}")
    frames = list(blur_frames)
    evs = list(streams)
    while len(frames) < n:
        frames = [frames[0]] + frames + [frames[-1]]
        evs = [evs[0]] + evs + [evs[-1]]
    return frames, evs


def sample_to_tensors(blur_frames, streams, bins: int, dtype=torch.float32):
    """Stack images and voxelized streams into batched model inputs."""
    h, w = np.shape(blur_frames[0])[:2]
    frames = torch.as_tensor(
        np.stack([np.asarray(f, dtype=np.float64).transpose(2, 0, 1)
                  for f in blur_frames])[None], dtype=dtype)
    voxels = torch.as_tensor(
        np.stack([build_voxel_grid(s, bins, h, w).data for s in streams])[None],
        dtype=dtype)
    return frames, voxels


def run_on_sample(model: DeblurNet, blur_frames, streams: "list[EventStream]") -> np.ndarray:
    """Deblur one sample given as images plus raw event streams.

    Validates counts and window ordering, replicates boundary frames of
    short samples, pads spatial dims to a multiple of 4 (replicate) and
    crops back. Returns the center sharp estimate as (H, W, 3) in [0, 1].
    """
    if len(blur_frames) != len(streams):
        raise ValueError(f"{len(blur_frames)} frames but {len(streams)} event streams")
    starts = [s.window.t_start for s in streams]
    if any(b < a for a, b in zip(starts, starts[1:])):
        raise ValueError("event stream windows must be ordered in time")
    blur_frames, streams = pad_sample(blur_frames, streams, model.cfg.frame_radius)
    frames, voxels = sample_to_tensors(blur_frames, streams, model.cfg.voxel_bins)

    h, w = frames.shape[-2:]
    ph, pw = (-h) % 4, (-w) % 4
    if ph or pw:
        frames = F.pad(frames.flatten(0, 1), (0, pw, 0, ph), mode="replicate").unflatten(0, frames.shape[:2])
        voxels = F.pad(voxels.flatten(0, 1), (0, pw, 0, ph), mode="replicate").unflatten(0, voxels.shape[:2])
    model.eval()
    with torch.no_grad():
        out = model(frames, voxels)
    out = out[0, :, :h, :w].numpy().transpose(1, 2, 0)
    return np.clip(out, 0.0, 1.0)
