from .align import (CascadeAligner, DynamicFilter, TemporalAlignBlock,
                    apply_dynamic_filter)
from .blocks import ChannelAttention, Mlp, ResBlock, channel_attention
from .intra import ConcatFusion, IntraFrameFusion, QueryState
from .model import (DeblurNet, Decoder, load_checkpoint, param_count,
                    run_on_sample, sample_to_tensors, save_checkpoint)
from .pyramid import EventPairEncoder, PyramidEncoder

__all__ = [
    "ChannelAttention", "channel_attention", "Mlp", "ResBlock",
    "IntraFrameFusion", "ConcatFusion", "QueryState",
    "TemporalAlignBlock", "CascadeAligner", "DynamicFilter", "apply_dynamic_filter",
    "PyramidEncoder", "EventPairEncoder",
    "DeblurNet", "Decoder", "param_count",
    "save_checkpoint", "load_checkpoint", "run_on_sample", "sample_to_tensors",
]
