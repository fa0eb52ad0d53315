"""8-bit PNG image I/O with float [0, 1] arrays in memory."""

import numpy as np
from PIL import Image


def load_image(path) -> np.ndarray:
    """Read a PNG as float64 RGB in [0, 1], shape (H, W, 3)."""
    with Image.open(path) as im:
        arr = np.asarray(im.convert("RGB"), dtype=np.float64)
    return arr / 255.0


def save_image(arr: np.ndarray, path) -> None:
    """Write a float image in [0, 1] (HxW or HxWx3) as an 8-bit PNG."""
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 2:
        arr = np.repeat(arr[:, :, None], 3, axis=2)
    data = np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(data, mode="RGB").save(path, format="PNG")
