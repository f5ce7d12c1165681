"""Materialize a network descriptor into an executable model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import MissingWeight, ShapeMismatch, WeightShapeMismatch
from ..netdesc import NetworkDescriptor, TensorShape, infer_shapes
from . import kernels
from .weights import WeightStore


def _same_padding(d: int, k: int, s: int) -> tuple[int, int]:
    # TF-style SAME: ceil(d/s) outputs, extra pixel on the bottom/right
    out = -(-d // s)
    total = max((out - 1) * s + k - d, 0)
    return total // 2, total - total // 2


def expected_weight_shapes(net: NetworkDescriptor) -> dict[str, tuple[int, ...]]:
    """Entry name -> shape for every parametric layer of the net."""
    shapes = infer_shapes(net)
    shapes["@input"] = net.input_shape
    expected: dict[str, tuple[int, ...]] = {}
    for layer in net.layers:
        x = shapes[layer.inputs[0]]
        if layer.kind in ("conv2d", "transposed_conv2d"):
            kh, kw = layer.param("kernel")
            expected[f"{layer.id}.weight"] = (layer.param("out_channels"), x.channels, kh, kw)
            if layer.param("bias", True):
                expected[f"{layer.id}.bias"] = (layer.param("out_channels"),)
        elif layer.kind == "dense":
            expected[f"{layer.id}.weight"] = (layer.param("units"), x.volume)
            if layer.param("bias", True):
                expected[f"{layer.id}.bias"] = (layer.param("units"),)
        elif layer.kind == "batch_norm":
            c = x.channels
            for part in ("weight", "bias", "running_mean", "running_var"):
                expected[f"{layer.id}.{part}"] = (c,)
    return expected


@dataclass(frozen=True)
class Model:
    """Descriptor + bound weights, ready for repeated prediction."""

    descriptor: NetworkDescriptor
    weights: WeightStore
    layer_shapes: dict[str, TensorShape]

    @property
    def input_shape(self) -> TensorShape:
        return self.descriptor.input_shape

    @property
    def output_shape(self) -> TensorShape:
        if not self.descriptor.layers:
            return self.descriptor.input_shape
        return self.layer_shapes[self.descriptor.output_layer_id]


def create_model(net: NetworkDescriptor, store: WeightStore) -> Model:
    """Validate the binding layer by layer and freeze the execution plan."""
    shapes = infer_shapes(net)
    expected = expected_weight_shapes(net)
    for name, shape in expected.items():
        layer_id = name.rsplit(".", 1)[0]
        arr = store.get(name)
        if arr is None:
            raise MissingWeight(layer_id, name)
        if tuple(arr.shape) != tuple(shape):
            raise WeightShapeMismatch(layer_id, shape, arr.shape)
    return Model(descriptor=net, weights=store, layer_shapes=shapes)


def _run_layer(layer, inputs: list[np.ndarray], store: WeightStore) -> np.ndarray:
    x = inputs[0]
    kind = layer.kind
    if kind == "conv2d":
        w = store.get(f"{layer.id}.weight")
        sh, sw = layer.param("stride")
        kh, kw = layer.param("kernel")
        if layer.param("padding") == "same":
            pt, pb = _same_padding(x.shape[1], kh, sh)
            pl, pr = _same_padding(x.shape[2], kw, sw)
            x = np.pad(x, ((0, 0), (pt, pb), (pl, pr)))
        out = kernels.conv2d(x, w, (sh, sw))
        bias = store.get(f"{layer.id}.bias")
        if bias is not None:
            out = out + bias[:, None, None]
        return out
    if kind == "transposed_conv2d":
        w = store.get(f"{layer.id}.weight")
        sh, sw = layer.param("stride")
        kh, kw = layer.param("kernel")
        out = kernels.transposed_conv2d(x, w, (sh, sw))
        if layer.param("padding") == "same":
            crop_h = kh - sh
            crop_w = kw - sw
            top, left = crop_h // 2, crop_w // 2
            out = out[:, top:top + x.shape[1] * sh, left:left + x.shape[2] * sw]
        bias = store.get(f"{layer.id}.bias")
        if bias is not None:
            out = out + bias[:, None, None]
        return out
    if kind == "max_pool2d":
        return kernels.max_pool2d(x, layer.param("kernel"), layer.param("stride"))
    if kind == "upsample_nearest":
        scale = layer.param("scale")
        return np.repeat(np.repeat(x, scale, axis=1), scale, axis=2)
    if kind == "batch_norm":
        eps = np.float32(layer.param("epsilon", 1e-5))
        gamma = store.get(f"{layer.id}.weight")[:, None, None]
        beta = store.get(f"{layer.id}.bias")[:, None, None]
        mean = store.get(f"{layer.id}.running_mean")[:, None, None]
        var = store.get(f"{layer.id}.running_var")[:, None, None]
        return (x - mean) / np.sqrt(var + eps) * gamma + beta
    if kind == "activation":
        fn = layer.param("fn")
        if fn == "relu":
            return np.maximum(x, np.float32(0.0))
        if fn == "sigmoid":
            return np.float32(1.0) / (np.float32(1.0) + np.exp(-x))
        # softmax over the channel axis (axis 0 for both (C,H,W) and (N,))
        shifted = x - x.max(axis=0, keepdims=True)
        e = np.exp(shifted)
        return e / e.sum(axis=0, keepdims=True)
    if kind == "concat":
        return np.concatenate(inputs, axis=0)
    if kind == "dense":
        w = store.get(f"{layer.id}.weight")
        out = w @ x.reshape(-1)
        bias = store.get(f"{layer.id}.bias")
        if bias is not None:
            out = out + bias
        return out
    raise AssertionError(kind)  # pragma: no cover


def run_layers(model: Model, image: np.ndarray) -> dict[str, np.ndarray]:
    """Forward pass keeping every layer's output, keyed by layer id."""
    x = np.asarray(image, dtype=np.float32)
    if tuple(x.shape) != model.input_shape.dims:
        raise ShapeMismatch(
            f"input shape {tuple(x.shape)} != model input {model.input_shape.dims}")
    values: dict[str, np.ndarray] = {"@input": x}
    for layer in model.descriptor.layers:
        inputs = [values[src] for src in layer.inputs]
        out = _run_layer(layer, inputs, model.weights).astype(np.float32, copy=False)
        if not np.all(np.isfinite(out)):
            raise ArithmeticError(f"non-finite values after layer {layer.id!r}")
        values[layer.id] = out
    return values


def predict(model: Model, image: np.ndarray) -> np.ndarray:
    """Forward pass; returns the output tensor as float32.

    The input must already match the model input shape exactly — adaptation
    is the preprocessing stage's job.
    """
    values = run_layers(model, image)
    if not model.descriptor.layers:
        return values["@input"]
    return values[model.descriptor.output_layer_id]
