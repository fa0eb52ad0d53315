"""Central finite-difference gradient verification for the network blocks.

Each named block is instantiated at a tiny double-precision configuration,
a fixed random projection turns its output into a scalar, and every input
and parameter scalar is perturbed by +/- epsilon. The reported figure is
the worst relative disagreement with autograd,
``max |g_a - g_n| / max(|g_a|, |g_n|, 1e-8)``.
"""

import torch

from .nets.align import CascadeAligner, TemporalAlignBlock
from .nets.intra import IntraFrameFusion
from .nets.model import Decoder

REL_FLOOR = 1e-8
# Keeps the projected loss around 1e-2 so finite-difference rounding noise
# (~|loss| * eps_machine / epsilon) stays far below the relative floor.
PROJECTION_SCALE = 1e-2


def _randn(gen, *shape):
    return torch.randn(*shape, generator=gen, dtype=torch.float64)


def _build_crife(size, gen):
    module = IntraFrameFusion(feat_channels=4, voxel_bins=4, iters=2).double()
    inputs = [_randn(gen, 1, 4, size, size), _randn(gen, 1, 4, size, size)]
    return module, (lambda blur, voxel: module(blur, voxel)), inputs


def _build_ctfa(size, gen):
    module = TemporalAlignBlock(channels=4, kernel_size=3, has_hidden=True).double()
    inputs = [_randn(gen, 1, 4, size, size) for _ in range(6)]
    return module, (lambda *t: module(*t)), inputs


def _pyramid_shapes(size, base):
    return [(1, base, size, size),
            (1, 2 * base, size // 2, size // 2),
            (1, 4 * base, size // 4, size // 4)]


def _build_cascade(size, gen):
    module = CascadeAligner(base_channels=2, kernel_size=3).double()
    shapes = _pyramid_shapes(size, 2)
    inputs = [_randn(gen, *sh) for _ in range(5 + 4) for sh in shapes]

    def fn(*flat):
        pyrs = [list(flat[i * 3:(i + 1) * 3]) for i in range(9)]
        return module(pyrs[:5], pyrs[5:])

    return module, fn, inputs


def _build_decode(size, gen):
    module = Decoder(base_channels=2).double()
    inputs = [_randn(gen, *sh) for sh in _pyramid_shapes(size, 2)]
    inputs.append(_randn(gen, 1, 3, size, size))

    def fn(a0, a1, a2, frame):
        return module([a0, a1, a2], frame)

    return module, fn, inputs


def _build_linear(size, gen):
    # sanity case: gradients of a lone conv are exact, so any error here
    # measures the checker's own noise floor
    module = torch.nn.Conv2d(3, 4, 3, padding=1).double()
    inputs = [_randn(gen, 1, 3, size, size)]
    return module, (lambda x: module(x)), inputs


BLOCKS = {
    "crife_forward": _build_crife,
    "ctfa": _build_ctfa,
    "cascade_align": _build_cascade,
    "decode": _build_decode,
    "linear": _build_linear,
}


def _as_list(out):
    return list(out) if isinstance(out, (list, tuple)) else [out]


def gradient_check(block_id: str, size: int = 4, epsilon: float = 1e-5,
                   seed: int = 0) -> float:
    """Worst relative error between analytic and numeric gradients."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if size % 4 != 0:
        raise ValueError("size must be a multiple of 4")
    if block_id not in BLOCKS:
        raise ValueError(f"unknown block {block_id!r}; "
                         f"choose from {sorted(BLOCKS)}")
    torch.manual_seed(seed)  # parameter init must not depend on ambient state
    gen = torch.Generator().manual_seed(seed)
    module, fn, inputs = BLOCKS[block_id](size, gen)
    for t in inputs:
        t.requires_grad_(True)
    leaves = inputs + list(module.parameters())

    projections = [PROJECTION_SCALE * torch.randn(o.shape, generator=gen, dtype=torch.float64)
                   for o in _as_list(fn(*inputs))]

    def scalar_loss():
        outs = _as_list(fn(*inputs))
        return sum((o * p).sum() for o, p in zip(outs, projections))

    analytic = torch.autograd.grad(scalar_loss(), leaves)

    worst = 0.0
    with torch.no_grad():
        for leaf, grad in zip(leaves, analytic):
            flat = leaf.view(-1)
            gflat = grad.reshape(-1)
            for i in range(flat.numel()):
                orig = flat[i].item()
                flat[i] = orig + epsilon
                up = float(scalar_loss())
                flat[i] = orig - epsilon
                down = float(scalar_loss())
                flat[i] = orig
                numeric = (up - down) / (2.0 * epsilon)
                ga = float(gflat[i])
                rel = abs(ga - numeric) / max(abs(ga), abs(numeric), REL_FLOOR)
                worst = max(worst, rel)
    return worst
