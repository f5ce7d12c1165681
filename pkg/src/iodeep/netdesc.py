"""Architecture documents: parsing, shape inference, input compatibility.

The document is UTF-8 JSON with top-level keys:

* ``input_shape`` — list of 1..4 positive ints, channels-first for images.
* ``architecture`` — ordered list of layer objects. Each layer consumes the
  previous layer's output (the first consumes the network input); ``concat``
  layers additionally consume every skip connection targeting them.
* ``skip_connections`` — optional list of ``{"from": id, "to": id}`` pairs
  whose ``to`` must name a concat layer.

The full layer vocabulary and per-kind parameters are documented in
``docs/architecture-schema.md`` and mirrored by ``docs/schema/*.json``
examples shipped with the repo.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    ConcatSpatialMismatch,
    CyclicGraph,
    DanglingSkipConnection,
    InvalidLayerParams,
    MalformedDocument,
    ShapeUnderflow,
    UnknownLayerKind,
    UnsupportedPhotometric,
)
from .images import PixelMeta

LAYER_KINDS = (
    "conv2d",
    "transposed_conv2d",
    "max_pool2d",
    "upsample_nearest",
    "batch_norm",
    "activation",
    "concat",
    "dense",
)

ACTIVATIONS = ("relu", "sigmoid", "softmax")


@dataclass(frozen=True)
class TensorShape:
    """Ordered positive dims; (channels, height, width) for image tensors."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not (1 <= len(dims) <= 4):
            raise InvalidLayerParams(f"tensor rank must be 1..4, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise ShapeUnderflow(f"non-positive dimension in {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def rank(self) -> int:
        return len(self.dims)

    @property
    def volume(self) -> int:
        return math.prod(self.dims)

    @property
    def channels(self) -> int:
        return self.dims[0]

    @property
    def spatial(self) -> tuple[int, ...]:
        return self.dims[1:]

    def __iter__(self):
        return iter(self.dims)

    def __repr__(self):
        return "x".join(str(d) for d in self.dims)


@dataclass(frozen=True)
class LayerSpec:
    id: str
    kind: str
    params: dict = field(default_factory=dict)
    inputs: tuple[str, ...] = ()  # resolved wiring; concat has >= 2

    def param(self, name, default=None):
        return self.params.get(name, default)


@dataclass(frozen=True)
class NetworkDescriptor:
    input_shape: TensorShape
    layers: tuple[LayerSpec, ...]
    skip_connections: tuple[tuple[str, str], ...] = ()

    @property
    def output_layer_id(self) -> str | None:
        return self.layers[-1].id if self.layers else None

    def layer(self, layer_id: str) -> LayerSpec:
        for layer in self.layers:
            if layer.id == layer_id:
                return layer
        raise KeyError(layer_id)


@dataclass(frozen=True)
class ReshapePlan:
    """What preprocessing must do to feed a slice into the network."""

    action: str  # none | resize | channel_adapt_then_resize
    target: TensorShape
    interpolation: str = "bilinear"

    @property
    def is_identity(self) -> bool:
        return self.action == "none"


def _pair(value, what: str) -> tuple[int, int]:
    if isinstance(value, int):
        return (value, value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return (int(value[0]), int(value[1]))
    raise InvalidLayerParams(f"{what} must be an int or [h, w] pair, got {value!r}")


def _parse_layer(obj: dict, index: int) -> LayerSpec:
    if not isinstance(obj, dict):
        raise MalformedDocument(f"layer #{index} is not an object")
    kind = obj.get("kind")
    if kind not in LAYER_KINDS:
        raise UnknownLayerKind(f"layer #{index}: unknown kind {kind!r}")
    layer_id = obj.get("id")
    if not layer_id or not isinstance(layer_id, str):
        raise MalformedDocument(f"layer #{index} ({kind}) has no id")
    params: dict = {}
    if kind in ("conv2d", "transposed_conv2d"):
        if "out_channels" not in obj:
            raise InvalidLayerParams(f"{layer_id}: {kind} requires out_channels")
        params["out_channels"] = int(obj["out_channels"])
        params["kernel"] = _pair(obj.get("kernel", 3), f"{layer_id}.kernel")
        params["stride"] = _pair(obj.get("stride", 1), f"{layer_id}.stride")
        padding = obj.get("padding", "same" if kind == "conv2d" else "valid")
        if padding not in ("same", "valid"):
            raise InvalidLayerParams(f"{layer_id}: padding must be 'same' or 'valid'")
        params["padding"] = padding
        params["bias"] = bool(obj.get("bias", True))
    elif kind == "max_pool2d":
        params["kernel"] = _pair(obj.get("kernel", 2), f"{layer_id}.kernel")
        params["stride"] = _pair(obj.get("stride", obj.get("kernel", 2)), f"{layer_id}.stride")
    elif kind == "upsample_nearest":
        scale = int(obj.get("scale", 2))
        if scale < 1:
            raise InvalidLayerParams(f"{layer_id}: scale must be >= 1")
        params["scale"] = scale
    elif kind == "activation":
        fn = obj.get("fn")
        if fn not in ACTIVATIONS:
            raise InvalidLayerParams(f"{layer_id}: activation fn must be one of {ACTIVATIONS}")
        params["fn"] = fn
    elif kind == "dense":
        if "units" not in obj:
            raise InvalidLayerParams(f"{layer_id}: dense requires units")
        params["units"] = int(obj["units"])
        params["bias"] = bool(obj.get("bias", True))
    elif kind == "batch_norm":
        params["epsilon"] = float(obj.get("epsilon", 1e-5))
    # concat carries no parameters of its own
    return LayerSpec(id=layer_id, kind=kind, params=params)


def parse_architecture(doc: str) -> NetworkDescriptor:
    """Parse a JSON architecture document into a validated descriptor."""
    try:
        data = json.loads(doc)
    except (json.JSONDecodeError, TypeError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedDocument("top level must be an object")
    if "input_shape" not in data or "architecture" not in data:
        raise MalformedDocument("missing input_shape or architecture key")
    shape_raw = data["input_shape"]
    if not isinstance(shape_raw, list) or not shape_raw:
        raise MalformedDocument("input_shape must be a non-empty integer list")
    input_shape = TensorShape(tuple(shape_raw))
    layers_raw = data["architecture"]
    if not isinstance(layers_raw, list):
        raise MalformedDocument("architecture must be a list")
    layers = [_parse_layer(obj, i) for i, obj in enumerate(layers_raw)]
    seen = set()
    for layer in layers:
        if layer.id in seen:
            raise MalformedDocument(f"duplicate layer id {layer.id!r}")
        seen.add(layer.id)

    skips_raw = data.get("skip_connections", [])
    if not isinstance(skips_raw, list):
        raise MalformedDocument("skip_connections must be a list")
    skips: list[tuple[str, str]] = []
    for entry in skips_raw:
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise MalformedDocument(f"skip connection {entry!r} must carry from/to")
        skips.append((str(entry["from"]), str(entry["to"])))

    index = {layer.id: i for i, layer in enumerate(layers)}
    for src, dst in skips:
        if src not in index or dst not in index:
            raise DanglingSkipConnection(f"skip {src!r}->{dst!r} references a missing layer")
        if layers[index[dst]].kind != "concat":
            raise DanglingSkipConnection(f"skip target {dst!r} is not a concat layer")
        if index[src] >= index[dst]:
            raise CyclicGraph(f"skip {src!r}->{dst!r} would not be a forward edge")

    # resolve wiring: sequential chain + skip fan-in on concat layers
    wired: list[LayerSpec] = []
    for i, layer in enumerate(layers):
        inputs = ["@input" if i == 0 else layers[i - 1].id]
        if layer.kind == "concat":
            inputs.extend(src for src, dst in skips if dst == layer.id)
            if len(inputs) < 2:
                raise InvalidLayerParams(f"{layer.id}: concat needs at least 2 inputs")
        wired.append(LayerSpec(layer.id, layer.kind, layer.params, tuple(inputs)))

    return NetworkDescriptor(
        input_shape=input_shape,
        layers=tuple(wired),
        skip_connections=tuple(skips),
    )


def serialize_architecture(net: NetworkDescriptor) -> str:
    """Inverse of parseable form: reparsing the output yields an equal net."""
    arch = []
    for layer in net.layers:
        obj: dict = {"id": layer.id, "kind": layer.kind}
        for key, value in layer.params.items():
            obj[key] = list(value) if isinstance(value, tuple) else value
        arch.append(obj)
    doc = {
        "input_shape": list(net.input_shape.dims),
        "architecture": arch,
    }
    if net.skip_connections:
        doc["skip_connections"] = [{"from": s, "to": d} for s, d in net.skip_connections]
    return json.dumps(doc, indent=2)


# --- shape inference --------------------------------------------------------


def _conv_out(d: int, k: int, s: int, padding: str) -> int:
    if padding == "same":
        return math.ceil(d / s)
    return (d - k) // s + 1


def _spatial_or_underflow(layer_id: str, dims: tuple[int, ...]) -> tuple[int, ...]:
    if any(d < 1 for d in dims):
        raise ShapeUnderflow(f"{layer_id}: spatial dims fall below 1: {dims}")
    return dims


def _layer_output_shape(layer: LayerSpec, inputs: list[TensorShape]) -> TensorShape:
    kind = layer.kind
    x = inputs[0]
    if kind == "conv2d" or kind == "transposed_conv2d":
        if x.rank != 3:
            raise InvalidLayerParams(f"{layer.id}: {kind} expects a (C,H,W) input, got {x}")
        kh, kw = layer.param("kernel")
        sh, sw = layer.param("stride")
        padding = layer.param("padding")
        h, w = x.spatial
        if kind == "conv2d":
            if padding == "valid" and (kh > h or kw > w):
                raise ShapeUnderflow(f"{layer.id}: kernel {kh}x{kw} exceeds input {h}x{w}")
            out = (_conv_out(h, kh, sh, padding), _conv_out(w, kw, sw, padding))
        else:
            if padding == "same":
                if kh < sh or kw < sw:
                    raise InvalidLayerParams(
                        f"{layer.id}: transposed 'same' requires kernel >= stride")
                out = (h * sh, w * sw)
            else:
                out = ((h - 1) * sh + kh, (w - 1) * sw + kw)
        out = _spatial_or_underflow(layer.id, out)
        return TensorShape((layer.param("out_channels"), *out))
    if kind == "max_pool2d":
        if x.rank != 3:
            raise InvalidLayerParams(f"{layer.id}: pooling expects a (C,H,W) input")
        kh, kw = layer.param("kernel")
        sh, sw = layer.param("stride")
        h, w = x.spatial
        if kh > h or kw > w:
            raise ShapeUnderflow(f"{layer.id}: pool window {kh}x{kw} exceeds input {h}x{w}")
        out = ((h - kh) // sh + 1, (w - kw) // sw + 1)
        return TensorShape((x.channels, *_spatial_or_underflow(layer.id, out)))
    if kind == "upsample_nearest":
        if x.rank != 3:
            raise InvalidLayerParams(f"{layer.id}: upsample expects a (C,H,W) input")
        scale = layer.param("scale")
        h, w = x.spatial
        return TensorShape((x.channels, h * scale, w * scale))
    if kind in ("batch_norm", "activation"):
        return x
    if kind == "concat":
        if any(s.rank != 3 for s in inputs):
            raise InvalidLayerParams(f"{layer.id}: concat expects (C,H,W) inputs")
        spatial = inputs[0].spatial
        for s in inputs[1:]:
            if s.spatial != spatial:
                raise ConcatSpatialMismatch(
                    f"{layer.id}: inputs disagree on spatial dims: "
                    f"{[str(s) for s in inputs]}")
        return TensorShape((sum(s.channels for s in inputs), *spatial))
    if kind == "dense":
        return TensorShape((layer.param("units"),))
    raise UnknownLayerKind(kind)  # pragma: no cover


def infer_shapes(net: NetworkDescriptor) -> dict[str, TensorShape]:
    """Output shape of every layer, keyed by layer id."""
    shapes: dict[str, TensorShape] = {"@input": net.input_shape}
    for layer in net.layers:
        inputs = [shapes[src] for src in layer.inputs]
        shapes[layer.id] = _layer_output_shape(layer, inputs)
    del shapes["@input"]
    return shapes


def output_shape(net: NetworkDescriptor) -> TensorShape:
    if not net.layers:
        return net.input_shape
    return infer_shapes(net)[net.output_layer_id]


# --- input compatibility ----------------------------------------------------


def check_tensor_shape(meta: PixelMeta, input_shape: TensorShape) -> ReshapePlan:
    """Decide how a slice must be adapted to the network input tensor."""
    if meta.photometric_interpretation not in ("MONOCHROME1", "MONOCHROME2", "RGB"):
        raise UnsupportedPhotometric(
            f"photometric {meta.photometric_interpretation!r} not supported")
    if input_shape.rank != 3:
        raise InvalidLayerParams(f"image input shape must be (C,H,W), got {input_shape}")
    want_c, want_h, want_w = input_shape.dims
    have = (meta.samples_per_pixel, meta.rows, meta.columns)
    if have == (want_c, want_h, want_w):
        return ReshapePlan(action="none", target=input_shape)
    if meta.samples_per_pixel == want_c:
        return ReshapePlan(action="resize", target=input_shape)
    return ReshapePlan(action="channel_adapt_then_resize", target=input_shape)
