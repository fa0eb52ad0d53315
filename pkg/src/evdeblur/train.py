"""Training loop: L1 objective, Adam with cosine decay, crop/flip augmentation."""

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .config import NetConfig
from .events.voxel import build_voxel_grid
from .nets.model import DeblurNet, save_checkpoint
from .synth.dataset import load_manifest, load_sample

BASE_LR = 1e-4
FINAL_LR = 1e-6
CROP = 48


def l1_loss(pred, target):
    """Mean absolute error; accepts tensors or arrays of equal shape."""
    if tuple(np.shape(pred)) != tuple(np.shape(target)):
        raise ValueError(f"shapes differ: {np.shape(pred)} vs {np.shape(target)}")
    return abs(pred - target).mean()


@dataclass
class TrainState:
    step: int
    lr: float
    loss: float
    checkpoint: str
    seed: int


def load_training_set(data_root, cfg: NetConfig):
    """Materialize every manifest sample as model-ready tensors.

    Voxelization happens once here; crops and flips are applied per step.
    """
    manifest = load_manifest(data_root)
    if manifest["P"] < cfg.frame_radius:
        raise ValueError(
            f"dataset was built with P={manifest['P']} but the model needs "
            f"P={cfg.frame_radius}")
    items = []
    for rec in manifest["samples"]:
        sample = load_sample(data_root, manifest, rec)
        lo = len(sample.blur_frames) // 2 - cfg.frame_radius
        hi = len(sample.blur_frames) // 2 + cfg.frame_radius + 1
        blur = sample.blur_frames[lo:hi]
        streams = sample.event_streams[lo:hi]
        h, w = blur[0].shape[:2]
        frames = torch.as_tensor(
            np.stack([f.transpose(2, 0, 1) for f in blur]), dtype=torch.float32)
        voxels = torch.as_tensor(
            np.stack([build_voxel_grid(s, cfg.voxel_bins, h, w).data
                      for s in streams]), dtype=torch.float32)
        target = torch.as_tensor(
            sample.sharp_target.transpose(2, 0, 1), dtype=torch.float32)
        items.append({"id": sample.sample_id, "frames": frames,
                      "voxels": voxels, "target": target})
    if not items:
        raise ValueError("dataset manifest lists no samples")
    return items


def _augment(item, rng, crop):
    frames, voxels, target = item["frames"], item["voxels"], item["target"]
    h, w = frames.shape[-2:]
    ch, cw = min(crop, h), min(crop, w)
    ch -= ch % 4
    cw -= cw % 4
    y0 = int(rng.integers(0, h - ch + 1))
    x0 = int(rng.integers(0, w - cw + 1))
    frames = frames[..., y0:y0 + ch, x0:x0 + cw]
    voxels = voxels[..., y0:y0 + ch, x0:x0 + cw]
    target = target[..., y0:y0 + ch, x0:x0 + cw]
    if rng.random() < 0.5:
        # horizontal flip mirrors x for frames and voxel grids alike
        frames = torch.flip(frames, dims=[-1])
        voxels = torch.flip(voxels, dims=[-1])
        target = torch.flip(target, dims=[-1])
    return frames[None], voxels[None], target[None]


def train(cfg: NetConfig, data_root, steps: int, out_path, seed: int = 0,
          crop: int = CROP, log_path=None, checkpoint_every: int = 0) -> TrainState:
    """Optimize a fresh model for ``steps`` update steps and checkpoint it.

    Deterministic for a fixed seed on one device. Raises on a non-finite
    loss instead of continuing with poisoned weights.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    items = load_training_set(data_root, cfg)
    torch.manual_seed(seed)
    rng = np.random.default_rng(seed)
    model = DeblurNet(cfg)
    model.train()
    opt = torch.optim.Adam(model.parameters(), lr=BASE_LR)
    sched = torch.optim.lr_scheduler.CosineAnnealingLR(opt, T_max=steps, eta_min=FINAL_LR)

    out_path = Path(out_path)
    log_lines = []
    loss_value = float("nan")
    for step in range(1, steps + 1):
        item = items[int(rng.integers(len(items)))]
        frames, voxels, target = _augment(item, rng, crop)
        pred = model(frames, voxels)
        loss = l1_loss(pred, target)
        loss_value = float(loss.detach())
        if not np.isfinite(loss_value):
            raise RuntimeError(
                f"training aborted: loss became {loss_value} at step {step} "
                f"(sample {item['id']}, lr {opt.param_groups[0]['lr']:.3e})")
        opt.zero_grad()
        loss.backward()
        opt.step()
        sched.step()
        log_lines.append(f"step {step} loss {loss_value:.6f} "
                         f"lr {opt.param_groups[0]['lr']:.6e}")
        if checkpoint_every and step % checkpoint_every == 0:
            save_checkpoint(model, out_path)

    save_checkpoint(model, out_path)
    if log_path is not None:
        Path(log_path).write_text("\n".join(log_lines) + "\n", encoding="utf-8")
    return TrainState(step=steps, lr=opt.param_groups[0]["lr"],
                      loss=loss_value, checkpoint=str(out_path), seed=seed)
