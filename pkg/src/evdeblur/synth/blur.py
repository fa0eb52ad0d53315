"""Blur synthesis by averaging consecutive sharp frames."""

from typing import Sequence

import numpy as np

GAMMA = 2.2


def synthesize_blur(window_frames: Sequence[np.ndarray], use_gamma: bool = False) -> np.ndarray:
    """Average the frames of one exposure window into a blurred frame.

    With ``use_gamma`` the frames are linearized with exponent 2.2 before
    averaging and re-encoded afterwards, approximating averaging in the
    sensor's linear domain.
    """
    if len(window_frames) == 0:
        raise ValueError("need at least one frame to synthesize blur")
    shape = np.shape(window_frames[0])
    for i, f in enumerate(window_frames):
        if np.shape(f) != shape:
            raise ValueError(f"frame {i} shape {np.shape(f)} != {shape}")
    stack = np.stack([np.asarray(f, dtype=np.float64) for f in window_frames])
    if use_gamma:
        return np.power(np.power(stack, GAMMA).mean(axis=0), 1.0 / GAMMA)
    return stack.mean(axis=0)
