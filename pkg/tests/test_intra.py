import pytest
import torch

from evdeblur.nets.intra import ConcatFusion, IntraFrameFusion, QueryState

from conftest import zero_biases, zero_module


def _fusion(cf=8, bins=16, iters=4):
    torch.manual_seed(0)
    return IntraFrameFusion(feat_channels=cf, voxel_bins=bins, iters=iters)


def test_constructor_validates_divisibility_and_width():
    with pytest.raises(ValueError, match="divide"):
        IntraFrameFusion(8, voxel_bins=6, iters=4)
    with pytest.raises(ValueError, match="even"):
        IntraFrameFusion(5, voxel_bins=4, iters=2)


def test_encode_query_shapes_forced_by_construction():
    fusion = _fusion(cf=8, bins=16, iters=4)
    # concat of blur (8) plus 4 event features (8 each) -> 40 channels
    assert fusion.query_proj.in_channels == 40
    blur = torch.randn(1, 8, 16, 16)
    events = fusion.extract_event_features(torch.randn(1, 16, 16, 16))
    q_cal, state = fusion.encode_query(blur, events)
    assert q_cal.shape == (1, 8, 16, 16)
    assert state.q.shape == (1, 4, 8, 8)
    assert state.step == 0 and state.limit == 4
    assert float(state.alpha.detach()) > 0


def test_zero_inputs_with_zero_biases_give_zero_query():
    fusion = zero_biases(_fusion(cf=4, bins=4, iters=2))
    blur = torch.zeros(1, 4, 8, 8)
    events = [torch.zeros(1, 4, 8, 8) for _ in range(2)]
    q_cal, state = fusion.encode_query(blur, events)
    assert torch.all(q_cal == 0)
    assert torch.all(state.q == 0)


def test_encode_query_shape_errors():
    fusion = _fusion(cf=4, bins=4, iters=2)
    blur = torch.randn(1, 4, 8, 8)
    bad = [torch.randn(1, 4, 8, 8), torch.randn(1, 4, 6, 8)]
    with pytest.raises(ValueError, match="aligned"):
        fusion.encode_query(blur, bad)
    with pytest.raises(ValueError, match="expected 2 event features"):
        fusion.encode_query(blur, bad[:1])


def test_kv_projection_shapes_and_zero_case():
    fusion = _fusion(cf=4, bins=4, iters=2)
    assert fusion.proj_k.out_channels == fusion.query_channels
    assert fusion.proj_v.out_channels == fusion.query_channels
    zero_module(fusion.kv_feat)
    zero_module(fusion.proj_k)
    zero_module(fusion.proj_v)
    state = QueryState(torch.zeros(1, 2, 4, 4), torch.tensor(1.0), 0, 2)
    k, v = fusion.kv_project(state, torch.zeros(1, 2, 4, 4))
    assert torch.all(k == 0) and torch.all(v == 0)
    with pytest.raises(ValueError, match="resolution"):
        fusion.kv_project(state, torch.zeros(1, 2, 8, 8))


def test_query_update_residual_and_state_error():
    fusion = _fusion(cf=4, bins=4, iters=2)
    zero_module(fusion.mlp)
    q = torch.randn(1, 2, 4, 4)
    attn = torch.randn(1, 2, 4, 4)
    state = QueryState(q, torch.tensor(1.0), 0, 2)
    updated = fusion.query_update(state, attn)
    assert torch.equal(updated.q, q + attn)
    assert updated.step == 1
    # with zero attention the query is a fixed point
    fixed = fusion.query_update(state, torch.zeros_like(attn))
    assert torch.equal(fixed.q, q)
    exhausted = QueryState(q, torch.tensor(1.0), 2, 2)
    with pytest.raises(RuntimeError, match="no steps left"):
        fusion.query_update(exhausted, attn)


def test_query_state_validates_step_range():
    with pytest.raises(ValueError, match="outside"):
        QueryState(torch.zeros(1), torch.tensor(1.0), 5, 4)


def test_forward_skip_path_when_attention_frozen():
    fusion = _fusion(cf=4, bins=4, iters=2)
    zero_module(fusion.proj_k)
    zero_module(fusion.proj_v)
    zero_module(fusion.mlp)
    zero_module(fusion.upsample)
    blur = torch.randn(1, 4, 8, 8)
    voxel = torch.zeros(1, 4, 8, 8)
    out = fusion(blur, voxel)
    q_cal, _ = fusion.encode_query(blur, fusion.extract_event_features(voxel))
    assert torch.equal(out, q_cal)


@pytest.mark.parametrize("iters", [1, 2, 4])
def test_output_matches_blur_feature_shape(iters):
    fusion = _fusion(cf=8, bins=16, iters=iters)
    blur = torch.randn(2, 8, 12, 20)
    out = fusion(blur, torch.randn(2, 16, 12, 20))
    assert out.shape == blur.shape


def test_single_iteration_is_one_attention_pass():
    fusion = _fusion(cf=4, bins=4, iters=1)
    fusion(torch.randn(1, 4, 8, 8), torch.randn(1, 4, 8, 8))
    assert fusion.attention.calls == 1


def test_event_extractor_shared_across_subgrids():
    fusion = _fusion(cf=4, bins=8, iters=4)
    calls = []
    fusion.event_feat.register_forward_hook(lambda m, i, o: calls.append(id(m)))
    fusion(torch.randn(1, 4, 8, 8), torch.randn(1, 8, 8, 8))
    assert len(calls) == 4
    assert len(set(calls)) == 1


def test_permuting_event_order_changes_output():
    fusion = _fusion(cf=4, bins=8, iters=4)
    blur = torch.randn(1, 4, 8, 8)
    voxel = torch.randn(1, 8, 8, 8)
    base = fusion(blur, voxel)
    permuted = torch.cat([voxel[:, 2:], voxel[:, :2]], dim=1)
    assert not torch.allclose(base, fusion(blur, permuted))


def test_concat_fusion_replacement():
    torch.manual_seed(0)
    fusion = ConcatFusion(feat_channels=4, voxel_bins=4, iters=2)
    blur = torch.randn(1, 4, 8, 8)
    out = fusion(blur, torch.randn(1, 4, 8, 8))
    assert out.shape == blur.shape
    n_intra = sum(p.numel() for p in _fusion(cf=4, bins=4, iters=2).parameters())
    n_concat = sum(p.numel() for p in fusion.parameters())
    assert n_intra > n_concat
