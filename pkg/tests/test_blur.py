import numpy as np
import pytest

from evdeblur.synth.blur import synthesize_blur


def test_identical_frames_average_to_themselves():
    frame = np.random.default_rng(0).uniform(size=(8, 8, 3))
    out = synthesize_blur([frame] * 7)
    np.testing.assert_allclose(out, frame, atol=1e-12)


def test_two_constant_frames():
    out = synthesize_blur([np.zeros((4, 4)), np.ones((4, 4))])
    np.testing.assert_allclose(out, 0.5)


def test_gamma_average_matches_direct_evaluation():
    a = np.full((2, 2), 0.25)
    b = np.full((2, 2), 0.75)
    expected = ((0.25 ** 2.2 + 0.75 ** 2.2) / 2.0) ** (1.0 / 2.2)
    out = synthesize_blur([a, b], use_gamma=True)
    np.testing.assert_allclose(out, expected, rtol=1e-12)


def test_permutation_invariance():
    rng = np.random.default_rng(1)
    frames = [rng.uniform(size=(6, 6, 3)) for _ in range(5)]
    fwd = synthesize_blur(frames)
    rev = synthesize_blur(frames[::-1])
    np.testing.assert_allclose(fwd, rev, atol=1e-12)


def test_empty_input_rejected():
    with pytest.raises(ValueError, match="at least one frame"):
        synthesize_blur([])


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError, match="shape"):
        synthesize_blur([np.zeros((4, 4)), np.zeros((4, 5))])
