"""Event-guided video deblurring.

Blurred video frames are fused with the event streams recorded during
their exposures: a recurrent cross-modal module enhances each frame's
features within its exposure, neighboring frames are aligned onto the
target coarse-to-fine with event guidance, and a U-shaped decoder emits
a residual sharp estimate. Includes the synthetic data pipeline
(blur averaging plus a contrast-threshold event simulator) and a
train/eval/verify harness.
"""

from ._kernels import BACKEND
from .config import NetConfig, load_config, save_config

__version__ = "0.1.0"

__all__ = ["BACKEND", "NetConfig", "load_config", "save_config", "__version__"]
