"""Three-level feature pyramids for frames and event pairs.

One encoder instance serves all 2P+1 frames (and one all 2P event
pairs), so parameters are shared across time by construction.
"""

from torch import nn

from .blocks import ResBlock, conv3x3


def _level(cin, cout, stride):
    return nn.Sequential(conv3x3(cin, cout, stride=stride), ResBlock(cout))


class PyramidEncoder(nn.Module):
    """Fused frame feature -> [scale0, scale1, scale2] with dyadic sizes."""

    def __init__(self, base_channels: int):
        super().__init__()
        b = base_channels
        self.level0 = _level(b, b, 1)
        self.level1 = _level(b, 2 * b, 2)
        self.level2 = _level(2 * b, 4 * b, 2)

    def forward(self, x):
        f0 = self.level0(x)
        f1 = self.level1(f0)
        f2 = self.level2(f1)
        return [f0, f1, f2]


class EventPairEncoder(nn.Module):
    """Stacked voxel grids of two consecutive exposures -> 3-level pyramid."""

    def __init__(self, pair_channels: int, base_channels: int):
        super().__init__()
        b = base_channels
        self.level0 = _level(pair_channels, b, 1)
        self.level1 = _level(b, 2 * b, 2)
        self.level2 = _level(2 * b, 4 * b, 2)

    def forward(self, pair):
        e0 = self.level0(pair)
        e1 = self.level1(e0)
        e2 = self.level2(e1)
        return [e0, e1, e2]
