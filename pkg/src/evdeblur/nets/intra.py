"""Recurrent cross-modal fusion inside one exposure window.

The exposure's voxel grid splits into N temporal sub-grids. A query
feature summarizing the blurred frame plus all event slices is refined N
times: step n projects keys/values from the query joined with the n-th
event slice and applies channel attention, so the query sweeps the
exposure in temporal order. The refined query is upsampled back onto the
full-resolution summary through a skip connection.
"""

from dataclasses import dataclass, replace

import torch
from torch import nn

from .blocks import ChannelAttention, Mlp, ResBlock, conv3x3, deconv4x4


@dataclass
class QueryState:
    """Recurrent query at half resolution, with its step bookkeeping."""

    q: torch.Tensor
    alpha: torch.Tensor
    step: int
    limit: int

    def __post_init__(self):
        if not 0 <= self.step <= self.limit:
            raise ValueError(f"step {self.step} outside [0, {self.limit}]")


class IntraFrameFusion(nn.Module):
    """Fuse a blur-frame feature with N temporally divided event features.

    Output matches the blur feature's shape. Requires even spatial dims
    (the query lives at half resolution).
    """

    def __init__(self, feat_channels: int, voxel_bins: int, iters: int):
        super().__init__()
        if voxel_bins % iters != 0:
            raise ValueError(f"iters={iters} must divide voxel_bins={voxel_bins}")
        if feat_channels % 2 != 0:
            raise ValueError("feat_channels must be even")
        self.iters = iters
        self.bins_per_part = voxel_bins // iters
        cf = feat_channels
        cq = feat_channels // 2
        self.query_channels = cq
        # one extractor shared by all N sub-grids
        self.event_feat = nn.Sequential(
            conv3x3(self.bins_per_part, cf), ResBlock(cf), ResBlock(cf))
        self.query_proj = nn.Conv2d(cf * (1 + iters), cf, 1)
        self.query_down = nn.Sequential(
            conv3x3(cf, cq, stride=2), ResBlock(cq), ResBlock(cq))
        self.event_down = conv3x3(cf, cq, stride=2)
        self.kv_feat = nn.Sequential(conv3x3(2 * cq, cq), ResBlock(cq), ResBlock(cq))
        self.proj_k = nn.Conv2d(cq, cq, 1)
        self.proj_v = nn.Conv2d(cq, cq, 1)
        self.attention = ChannelAttention()
        self.mlp = Mlp(cq)
        self.upsample = deconv4x4(cq, cf)

    def extract_event_features(self, voxel):
        """Split (B, bins, H, W) into N slices and encode each with the
        shared extractor."""
        if voxel.shape[1] != self.bins_per_part * self.iters:
            raise ValueError(
                f"expected {self.bins_per_part * self.iters} voxel channels, "
                f"got {voxel.shape[1]}")
        return [self.event_feat(part)
                for part in torch.split(voxel, self.bins_per_part, dim=1)]

    def encode_query(self, blur_feat, event_feats):
        """Summarize blur + event features; returns (summary, initial state)."""
        if len(event_feats) != self.iters:
            raise ValueError(f"expected {self.iters} event features, got {len(event_feats)}")
        for ef in event_feats:
            if ef.shape[-2:] != blur_feat.shape[-2:]:
                raise ValueError(
                    f"event feature {tuple(ef.shape)} not aligned with "
                    f"blur feature {tuple(blur_feat.shape)}")
        q_cal = self.query_proj(torch.cat([blur_feat] + list(event_feats), dim=1))
        q0 = self.query_down(q_cal)
        return q_cal, QueryState(q0, self.attention.alpha, 0, self.iters)

    def kv_project(self, state: QueryState, event_feat_down):
        """Keys and values from the query joined with one event slice
        (already at query resolution)."""
        if event_feat_down.shape[-2:] != state.q.shape[-2:]:
            raise ValueError(
                f"event feature {tuple(event_feat_down.shape)} not at query "
                f"resolution {tuple(state.q.shape)}")
        kv = self.kv_feat(torch.cat([state.q, event_feat_down], dim=1))
        return self.proj_k(kv), self.proj_v(kv)

    def query_update(self, state: QueryState, attn) -> QueryState:
        if state.step >= state.limit:
            raise RuntimeError(
                f"query already refined {state.limit} times; no steps left")
        q = state.q + attn + self.mlp(attn)
        return replace(state, q=q, step=state.step + 1)

    def forward(self, blur_feat, voxel):
        event_feats = self.extract_event_features(voxel)
        q_cal, state = self.encode_query(blur_feat, event_feats)
        for n in range(self.iters):
            k, v = self.kv_project(state, self.event_down(event_feats[n]))
            attn = self.attention(state.q, k, v)
            state = self.query_update(state, attn)
        return q_cal + self.upsample(state.q)


class ConcatFusion(nn.Module):
    """Baseline replacement: concatenate blur and event features, then one
    pointwise conv. Same interface as :class:`IntraFrameFusion`."""

    def __init__(self, feat_channels: int, voxel_bins: int, iters: int):
        super().__init__()
        if voxel_bins % iters != 0:
            raise ValueError(f"iters={iters} must divide voxel_bins={voxel_bins}")
        self.iters = iters
        self.bins_per_part = voxel_bins // iters
        cf = feat_channels
        self.event_feat = nn.Sequential(
            conv3x3(self.bins_per_part, cf), ResBlock(cf), ResBlock(cf))
        self.proj = nn.Conv2d(cf * (1 + iters), cf, 1)

    def forward(self, blur_feat, voxel):
        event_feats = [self.event_feat(part)
                       for part in torch.split(voxel, self.bins_per_part, dim=1)]
        return self.proj(torch.cat([blur_feat] + event_feats, dim=1))
