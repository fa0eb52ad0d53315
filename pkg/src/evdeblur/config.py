"""Network configuration and its flat key=value file format."""

import dataclasses
from dataclasses import dataclass
from pathlib import Path


@dataclass
class NetConfig:
    """Hyperparameters of the deblurring network.

    ``frame_radius`` (P) neighbors on each side of the target frame, so a
    sample holds 2P+1 frames. ``fusion_iters`` (N) must divide
    ``voxel_bins``: the exposure's voxel grid splits into N temporal
    sub-grids, one per recurrent fusion step. The two enable flags switch
    the intra-frame fusion and the cascaded alignment to their baseline
    replacements (concat+conv, identity) for ablations.
    """

    frame_radius: int = 2
    voxel_bins: int = 16
    fusion_iters: int = 4
    base_channels: int = 16
    scales: int = 3
    dynamic_kernel: int = 3
    enable_intra_fusion: bool = True
    enable_align: bool = True

    def __post_init__(self):
        if self.frame_radius < 1:
            raise ValueError("frame_radius must be >= 1")
        if self.voxel_bins < 1 or self.fusion_iters < 1:
            raise ValueError("voxel_bins and fusion_iters must be >= 1")
        if self.voxel_bins % self.fusion_iters != 0:
            raise ValueError(
                f"fusion_iters={self.fusion_iters} must divide voxel_bins={self.voxel_bins}"
            )
        if self.scales != 3:
            raise ValueError("the pyramid is fixed at 3 scales")
        if self.dynamic_kernel < 1 or self.dynamic_kernel % 2 == 0:
            raise ValueError("dynamic_kernel must be odd and >= 1")
        if self.base_channels < 2 or self.base_channels % 2 != 0:
            raise ValueError("base_channels must be even and >= 2")

    @property
    def n_frames(self) -> int:
        return 2 * self.frame_radius + 1

    def channels_at(self, scale: int) -> int:
        return self.base_channels * (2 ** scale)


def save_config(cfg: NetConfig, path) -> None:
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in dataclasses.fields(cfg)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_config(path) -> NetConfig:
    """Parse a flat key=value config file (``#`` comments allowed)."""
    values = {}
    fields = {f.name: f for f in dataclasses.fields(NetConfig)}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in fields:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        ftype = fields[key].type
        if ftype in ("bool", bool):
            if value.lower() in ("true", "1", "yes"):
                values[key] = True
            elif value.lower() in ("false", "0", "no"):
                values[key] = False
            else:
                raise ValueError(f"line {lineno}: bad boolean {value!r}")
        else:
            values[key] = int(value)
    return NetConfig(**values)
