"""Shared building blocks: residual convs, channel attention, MLP."""

import torch
import torch.nn.functional as F
from torch import nn


def conv3x3(cin, cout, stride=1):
    return nn.Conv2d(cin, cout, 3, stride=stride, padding=1)


def deconv4x4(cin, cout):
    """Stride-2 transposed conv that exactly doubles spatial size."""
    return nn.ConvTranspose2d(cin, cout, 4, stride=2, padding=1)


class ResBlock(nn.Module):
    """conv-relu-conv with identity skip, no normalization."""

    def __init__(self, channels):
        super().__init__()
        self.conv1 = conv3x3(channels, channels)
        self.conv2 = conv3x3(channels, channels)

    def forward(self, x):
        return x + self.conv2(F.relu(self.conv1(x)))


class ConvResBlock(nn.Module):
    """3x3 conv (optionally followed by ReLU) feeding one residual block."""

    def __init__(self, cin, cout, relu=False):
        super().__init__()
        self.conv = conv3x3(cin, cout)
        self.relu = relu
        self.res = ResBlock(cout)

    def forward(self, x):
        x = self.conv(x)
        if self.relu:
            x = F.relu(x)
        return self.res(x)


class Mlp(nn.Module):
    """Two pointwise convs with a GELU in between."""

    def __init__(self, channels, expansion=2):
        super().__init__()
        self.fc1 = nn.Conv2d(channels, channels * expansion, 1)
        self.fc2 = nn.Conv2d(channels * expansion, channels, 1)

    def forward(self, x):
        return self.fc2(F.gelu(self.fc1(x)))


def channel_attention(q, k, v, alpha):
    """Attention over the channel-by-channel covariance matrix.

    Spatial dims are flattened to length L and the C x C matrix
    softmax(Q K^T / alpha) row-mixes V, costing O(C^2 L) instead of the
    O(L^2 C) of token attention. Returns (output, attention matrix).
    """
    alpha_value = float(alpha.detach()) if torch.is_tensor(alpha) else float(alpha)
    if alpha_value <= 0:
        raise ValueError("attention temperature alpha must be positive")
    if q.shape != k.shape or q.shape != v.shape:
        raise ValueError(f"q/k/v shapes differ: {q.shape}, {k.shape}, {v.shape}")
    b, c, h, w = q.shape
    qm = q.reshape(b, c, h * w)
    km = k.reshape(b, c, h * w)
    vm = v.reshape(b, c, h * w)
    attn = torch.softmax(qm @ km.transpose(1, 2) / alpha, dim=-1)
    out = (attn @ vm).reshape(b, c, h, w)
    return out, attn


class ChannelAttention(nn.Module):
    """Channel attention with a learnable temperature.

    ``record_row_sums`` stashes the softmax row sums of the latest forward
    (detached) for normalization checks; ``calls`` counts invocations.
    """

    def __init__(self):
        super().__init__()
        self.alpha = nn.Parameter(torch.ones(()))
        self.record_row_sums = False
        self.last_row_sums = None
        self.calls = 0

    def forward(self, q, k, v):
        out, attn = channel_attention(q, k, v, self.alpha)
        self.calls += 1
        if self.record_row_sums:
            self.last_row_sums = attn.sum(dim=-1).detach()
        return out
