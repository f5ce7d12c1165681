"""Inference back-end: weights, model materialization, forward pass."""

from . import kernels
from .model import Model, create_model, expected_weight_shapes, predict, run_layers
from .preprocess import decode_pixel_array, normalize_intensities, preprocess
from .weights import (
    WeightStore,
    dump_weights,
    inline_weights_uri,
    load_weights,
    parse_weights,
    save_weights,
)

__all__ = [
    "kernels",
    "Model",
    "create_model",
    "expected_weight_shapes",
    "predict",
    "run_layers",
    "decode_pixel_array",
    "normalize_intensities",
    "preprocess",
    "WeightStore",
    "dump_weights",
    "inline_weights_uri",
    "load_weights",
    "parse_weights",
    "save_weights",
]
