from .blur import synthesize_blur
from .dataset import (SequenceSample, build_dataset, load_manifest,
                      load_sample, write_manifest)
from .simulate import (SharpSequence, ThresholdField, log_luminance,
                       sample_threshold_field, simulate_events)
from .toy import render_toy_sequence

__all__ = [
    "synthesize_blur",
    "SharpSequence", "ThresholdField",
    "sample_threshold_field", "simulate_events", "log_luminance",
    "build_dataset", "load_manifest", "write_manifest", "load_sample",
    "SequenceSample", "render_toy_sequence",
]
