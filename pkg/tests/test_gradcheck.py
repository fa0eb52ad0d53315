"""Finite-difference verification of the analytic gradients.

The expensive composite (cascade_align) runs only in the acceptance
suite; here the cheaper blocks are checked for real plus the method's
own sanity cases.
"""

import pytest

from evdeblur.gradcheck import BLOCKS, gradient_check


def test_epsilon_must_be_positive():
    with pytest.raises(ValueError, match="epsilon"):
        gradient_check("ctfa", epsilon=0.0)
    with pytest.raises(ValueError, match="epsilon"):
        gradient_check("ctfa", epsilon=-1e-5)


def test_unknown_block_rejected():
    with pytest.raises(ValueError, match="unknown block"):
        gradient_check("no_such_block")


def test_block_registry_covers_contract():
    assert {"crife_forward", "ctfa", "cascade_align", "decode"} <= set(BLOCKS)


def test_linear_block_is_exact_to_machine_precision():
    assert gradient_check("linear", size=4, epsilon=1e-5, seed=0) < 1e-8


def test_crife_forward_gradients():
    assert gradient_check("crife_forward", size=4, epsilon=1e-5, seed=0) < 1e-3


def test_ctfa_gradients():
    assert gradient_check("ctfa", size=4, epsilon=1e-5, seed=0) < 1e-3


def test_decode_gradients():
    assert gradient_check("decode", size=4, epsilon=1e-5, seed=0) < 1e-3
