"""Event-guided cascaded temporal feature alignment.

Neighboring-frame feature pyramids are aligned to the target frame from
the coarsest scale to the finest. At each scale a shared unit block
fuses the hidden state from the previous scale, aggregates the frame
triple with the event features bridging it, refines with a per-pixel
dynamic filter, and merges via channel cross-attention. Outer frames are
aligned first and collapse inward one ring per stage until the final
alignment centers on the target.
"""

from typing import List, NamedTuple, Optional

import torch
import torch.nn.functional as F
from torch import nn

from .blocks import ChannelAttention, ConvResBlock, Mlp, deconv4x4


class DynamicFilter(NamedTuple):
    """One k x k kernel per spatial location, shared across channels.

    ``weights`` has shape (B, k*k, H, W); channel j holds the tap at
    offset (dy, dx) = (j // k - k//2, j % k - k//2).
    """

    weights: torch.Tensor
    kernel_size: int


def apply_dynamic_filter(filt: DynamicFilter, feat: torch.Tensor) -> torch.Tensor:
    """Convolve each pixel's neighborhood with its own kernel (zero padding)."""
    weights, k = filt.weights, filt.kernel_size
    if weights.shape[1] != k * k:
        raise ValueError(f"filter has {weights.shape[1]} taps, expected {k * k}")
    if weights.shape[-2:] != feat.shape[-2:]:
        raise ValueError(
            f"filter grid {tuple(weights.shape[-2:])} does not match "
            f"feature grid {tuple(feat.shape[-2:])}")
    b, c, h, w = feat.shape
    cols = F.unfold(feat, k, padding=k // 2).reshape(b, c, k * k, h, w)
    return (cols * weights.unsqueeze(1)).sum(dim=2)


class TemporalAlignBlock(nn.Module):
    """Unit alignment step for one frame triple at one scale.

    Blocks at the bottom scale are built with ``has_hidden=False`` and
    fuse the frame feature alone; all other scales require the upsampled
    hidden state.
    """

    def __init__(self, channels: int, kernel_size: int = 3, has_hidden: bool = True):
        super().__init__()
        c = channels
        self.has_hidden = has_hidden
        self.kernel_size = kernel_size
        self.fuse = ConvResBlock(2 * c if has_hidden else c, c, relu=True)
        self.agg_fwd = ConvResBlock(3 * c, c)
        self.agg_bwd = ConvResBlock(3 * c, c)
        self.agg_merge = ConvResBlock(2 * c, c)
        self.filter_gen = ConvResBlock(c, kernel_size * kernel_size)
        self.proj_q = self._projection(c)
        self.proj_k = self._projection(c)
        self.proj_v = self._projection(c)
        self.attention = ChannelAttention()
        self.mlp = Mlp(c)

    @staticmethod
    def _projection(c):
        # pointwise then depth-wise conv
        return nn.Sequential(nn.Conv2d(c, c, 1),
                             nn.Conv2d(c, c, 3, padding=1, groups=c))

    def fuse_hidden(self, frame_feat, hidden=None):
        if self.has_hidden:
            if hidden is None:
                raise ValueError("this block requires a hidden state")
            if hidden.shape[-2:] != frame_feat.shape[-2:]:
                raise ValueError(
                    f"hidden {tuple(hidden.shape)} does not match frame "
                    f"feature {tuple(frame_feat.shape)}")
            return self.fuse(torch.cat([frame_feat, hidden], dim=1))
        if hidden is not None:
            raise RuntimeError("bottom-scale block takes no hidden state")
        return self.fuse(frame_feat)

    def aggregate_temporal(self, prev, cur, nxt, ev_fwd, ev_bwd):
        for name, t in (("prev", prev), ("next", nxt),
                        ("ev_fwd", ev_fwd), ("ev_bwd", ev_bwd)):
            if t.shape[-2:] != cur.shape[-2:]:
                raise ValueError(f"{name} {tuple(t.shape)} does not match "
                                 f"cur {tuple(cur.shape)}")
        t_fwd = self.agg_fwd(torch.cat([prev, cur, ev_fwd], dim=1))
        t_bwd = self.agg_bwd(torch.cat([cur, nxt, ev_bwd], dim=1))
        return self.agg_merge(torch.cat([t_fwd, t_bwd], dim=1))

    def generate_filter(self, motion_feat) -> DynamicFilter:
        return DynamicFilter(self.filter_gen(motion_feat), self.kernel_size)

    def attention_fuse(self, fused, refined):
        q = self.proj_q(fused)
        k = self.proj_k(refined)
        v = self.proj_v(refined)
        a = self.attention(q, k, v)
        return self.mlp(a) + a

    def forward(self, prev, cur, nxt, hidden, ev_fwd, ev_bwd):
        fused = self.fuse_hidden(cur, hidden)
        motion = self.aggregate_temporal(prev, cur, nxt, ev_fwd, ev_bwd)
        refined = apply_dynamic_filter(self.generate_filter(motion), motion)
        return self.attention_fuse(fused, refined)


class CascadeAligner(nn.Module):
    """Coarse-to-fine alignment of 2P+1 frame pyramids onto the target.

    One :class:`TemporalAlignBlock` per scale is reused for every call at
    that scale. ``last_block_calls`` / ``last_call_scales`` record the
    invocations of the most recent forward.
    """

    def __init__(self, base_channels: int, kernel_size: int = 3):
        super().__init__()
        ch = [base_channels * (2 ** s) for s in range(3)]
        self.blocks = nn.ModuleList([
            TemporalAlignBlock(ch[s], kernel_size, has_hidden=(s < 2))
            for s in range(3)
        ])
        self.hidden_up = nn.ModuleList([deconv4x4(ch[s + 1], ch[s]) for s in range(2)])
        self.last_block_calls = 0
        self.last_call_scales: List[int] = []

    def upsample_hidden(self, prev_aligned, scale: int):
        """Carry an aligned feature from scale+1 up to ``scale``."""
        if scale not in (0, 1):
            raise RuntimeError("no hidden state exists at the bottom pyramid level")
        return self.hidden_up[scale](prev_aligned)

    def _run_block(self, scale, prev, cur, nxt, hidden, ev_fwd, ev_bwd):
        self.last_block_calls += 1
        self.last_call_scales.append(scale)
        return self.blocks[scale](prev, cur, nxt, hidden, ev_fwd, ev_bwd)

    def forward(self, frame_pyramids, event_pyramids) -> List[torch.Tensor]:
        n = len(frame_pyramids)
        if n < 3 or n % 2 == 0:
            raise ValueError("need 2P+1 frame pyramids with P >= 1")
        radius = (n - 1) // 2
        if len(event_pyramids) != n - 1:
            raise ValueError(f"need {n - 1} event-pair pyramids, got {len(event_pyramids)}")
        for pyr in list(frame_pyramids) + list(event_pyramids):
            if len(pyr) != 3:
                raise ValueError("each pyramid must have exactly 3 levels")

        self.last_block_calls = 0
        self.last_call_scales = []
        target_levels: List[Optional[torch.Tensor]] = [None, None, None]
        coarser: dict = {}
        for s in (2, 1, 0):
            frames = {o: frame_pyramids[o + radius][s] for o in range(-radius, radius + 1)}
            pairs = {m: event_pyramids[m + radius][s] for m in range(-radius, radius)}
            hidden = ({} if s == 2 else
                      {o: self.upsample_hidden(coarser[o], s) for o in coarser})
            aligned: dict = {}

            def feat(o):
                return aligned.get(o, frames[o])

            # collapse outer rings inward, then center on the target
            for m in range(radius - 1, 0, -1):
                aligned[-m] = self._run_block(
                    s, feat(-m - 1), frames[-m], frames[-m + 1],
                    hidden.get(-m), pairs[-m - 1], pairs[-m])
                aligned[m] = self._run_block(
                    s, frames[m - 1], frames[m], feat(m + 1),
                    hidden.get(m), pairs[m - 1], pairs[m])
            aligned[0] = self._run_block(
                s, feat(-1), frames[0], feat(1),
                hidden.get(0), pairs[-1], pairs[0])
            target_levels[s] = aligned[0]
            coarser = aligned
        return target_levels
