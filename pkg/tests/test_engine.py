"""Engine tests: operator oracles, shape agreement, model binding."""

import json
import random

import numpy as np
import pytest

import oracles
from netgen import random_network, random_weights_for

from iodeep.engine import (
    WeightStore,
    create_model,
    expected_weight_shapes,
    kernels,
    predict,
    run_layers,
)
from iodeep.errors import MissingWeight, ShapeMismatch, WeightShapeMismatch
from iodeep.netdesc import infer_shapes, parse_architecture


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    previous = kernels.active_backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(previous)


def _net(layers, input_shape, skips=None):
    doc = {"input_shape": list(input_shape), "architecture": layers}
    if skips:
        doc["skip_connections"] = skips
    return parse_architecture(json.dumps(doc))


def _model(layers, input_shape, entries, skips=None):
    net = _net(layers, input_shape, skips)
    return create_model(net, WeightStore(entries))


def test_identity_model_returns_input(backend):
    model = _model([], (1, 5, 5), {})
    x = np.random.default_rng(0).normal(size=(1, 5, 5)).astype(np.float32)
    assert np.array_equal(predict(model, x), x)


def test_zero_conv_sigmoid_gives_half(backend):
    layers = [
        {"id": "c", "kind": "conv2d", "out_channels": 1, "kernel": 3, "padding": "same"},
        {"id": "s", "kind": "activation", "fn": "sigmoid"},
    ]
    entries = {"c.weight": np.zeros((1, 1, 3, 3), np.float32),
               "c.bias": np.zeros(1, np.float32)}
    model = _model(layers, (1, 6, 6), entries)
    out = predict(model, np.random.default_rng(1).random((1, 6, 6), np.float32))
    assert np.allclose(out, 0.5)


def test_predict_rejects_wrong_shape(backend):
    model = _model([], (1, 5, 5), {})
    with pytest.raises(ShapeMismatch):
        predict(model, np.zeros((1, 4, 5), np.float32))


def test_missing_weight():
    layers = [{"id": "c", "kind": "conv2d", "out_channels": 16, "kernel": 3}]
    with pytest.raises(MissingWeight):
        _model(layers, (1, 8, 8), {})


def test_weight_shape_mismatch():
    layers = [{"id": "c", "kind": "conv2d", "out_channels": 16, "kernel": 3}]
    entries = {"c.weight": np.zeros((16, 3, 3, 3), np.float32),
               "c.bias": np.zeros(16, np.float32)}
    with pytest.raises(WeightShapeMismatch) as err:
        _model(layers, (1, 8, 8), entries)
    assert err.value.layer_id == "c"
    assert err.value.expected == (16, 1, 3, 3)
    assert err.value.found == (16, 3, 3, 3)


def test_expected_shapes_for_conv():
    net = _net([{"id": "c", "kind": "conv2d", "out_channels": 16, "kernel": 3}], (1, 8, 8))
    assert expected_weight_shapes(net) == {"c.weight": (16, 1, 3, 3), "c.bias": (16,)}


# --- operator-level oracle equivalence --------------------------------------

N_PAIRS = 40  # per operator per backend here; the acceptance suite runs 200


def _rand(rng, *shape):
    return rng.normal(0, 1, size=shape).astype(np.float32)


def test_conv2d_matches_oracle(backend):
    rng = np.random.default_rng(11)
    for _ in range(N_PAIRS):
        c, o = rng.integers(1, 4, size=2)
        h, w = rng.integers(3, 9, size=2)
        k = int(rng.choice([1, 2, 3]))
        s = int(rng.choice([1, 2]))
        padding = str(rng.choice(["same", "valid"]))
        if padding == "valid" and (k > h or k > w):
            padding = "same"
        x = _rand(rng, c, h, w)
        wt = _rand(rng, o, c, k, k)
        b = _rand(rng, o)
        layers = [{"id": "c1", "kind": "conv2d", "out_channels": int(o), "kernel": k,
                   "stride": s, "padding": padding}]
        model = _model(layers, (int(c), int(h), int(w)), {"c1.weight": wt, "c1.bias": b})
        got = predict(model, x)
        want = oracles.conv2d(x, wt, b, (s, s), padding)
        assert got.shape == want.shape
        assert oracles.rel_err(got, want) <= 1e-5


def test_transposed_conv2d_matches_oracle(backend):
    rng = np.random.default_rng(12)
    for _ in range(N_PAIRS):
        c, o = rng.integers(1, 4, size=2)
        h, w = rng.integers(2, 8, size=2)
        s = int(rng.choice([1, 2]))
        k = s + int(rng.choice([0, 1, 2]))
        padding = str(rng.choice(["same", "valid"]))
        x = _rand(rng, c, h, w)
        wt = _rand(rng, o, c, k, k)
        b = _rand(rng, o)
        layers = [{"id": "t1", "kind": "transposed_conv2d", "out_channels": int(o),
                   "kernel": k, "stride": s, "padding": padding}]
        model = _model(layers, (int(c), int(h), int(w)), {"t1.weight": wt, "t1.bias": b})
        got = predict(model, x)
        want = oracles.transposed_conv2d(x, wt, b, (s, s), padding)
        assert got.shape == want.shape
        assert oracles.rel_err(got, want) <= 1e-5


def test_max_pool_matches_oracle(backend):
    rng = np.random.default_rng(13)
    for _ in range(N_PAIRS):
        c = int(rng.integers(1, 4))
        h, w = rng.integers(2, 9, size=2)
        k = int(rng.choice([1, 2, min(3, h, w)]))
        s = int(rng.choice([1, 2]))
        x = _rand(rng, c, int(h), int(w))
        layers = [{"id": "p", "kind": "max_pool2d", "kernel": k, "stride": s}]
        model = _model(layers, (c, int(h), int(w)), {})
        got = predict(model, x)
        want = oracles.max_pool2d(x, (k, k), (s, s))
        assert got.shape == want.shape
        assert oracles.rel_err(got, want) <= 1e-5


def test_upsample_matches_oracle(backend):
    rng = np.random.default_rng(14)
    for _ in range(N_PAIRS):
        c = int(rng.integers(1, 4))
        h, w = rng.integers(1, 8, size=2)
        scale = int(rng.choice([1, 2, 3]))
        x = _rand(rng, c, int(h), int(w))
        layers = [{"id": "u", "kind": "upsample_nearest", "scale": scale}]
        model = _model(layers, (c, int(h), int(w)), {})
        got = predict(model, x)
        want = oracles.upsample_nearest(x, scale)
        assert got.shape == want.shape
        assert oracles.rel_err(got, want) <= 1e-5


def test_dense_matches_oracle(backend):
    rng = np.random.default_rng(15)
    for _ in range(N_PAIRS):
        c = int(rng.integers(1, 3))
        h, w = rng.integers(1, 6, size=2)
        units = int(rng.integers(1, 8))
        x = _rand(rng, c, int(h), int(w))
        wt = _rand(rng, units, c * int(h) * int(w))
        b = _rand(rng, units)
        layers = [{"id": "d", "kind": "dense", "units": units}]
        model = _model(layers, (c, int(h), int(w)), {"d.weight": wt, "d.bias": b})
        got = predict(model, x)
        want = oracles.dense(x, wt, b)
        assert got.shape == want.shape
        assert oracles.rel_err(got, want) <= 1e-5


def test_resize_matches_oracle(backend):
    rng = np.random.default_rng(16)
    for _ in range(20):
        c = int(rng.integers(1, 4))
        h, w = (int(v) for v in rng.integers(2, 10, size=2))
        oh, ow = (int(v) for v in rng.integers(2, 12, size=2))
        x = _rand(rng, c, h, w)
        got = kernels.bilinear_resize(x, oh, ow)
        want = oracles.bilinear_resize(x, oh, ow)
        assert got.shape == want.shape
        assert oracles.rel_err(got, want) <= 1e-5


# --- whole-network properties ------------------------------------------------


def test_executed_shapes_match_inference(backend):
    rng = random.Random(20)
    for _ in range(30):
        net = random_network(rng)
        model = create_model(net, WeightStore(random_weights_for(net, rng)))
        x = np.random.default_rng(rng.randrange(2**32)).normal(
            size=net.input_shape.dims).astype(np.float32)
        shapes = infer_shapes(net)
        values = run_layers(model, x)
        for layer in net.layers:
            assert tuple(values[layer.id].shape) == shapes[layer.id].dims


def test_determinism_bitwise(backend):
    rng = random.Random(21)
    net = random_network(rng, with_head=True)
    model = create_model(net, WeightStore(random_weights_for(net, rng)))
    x = np.random.default_rng(7).random(net.input_shape.dims, np.float32)
    a = predict(model, x)
    b = predict(model, x)
    assert a.tobytes() == b.tobytes()


def test_linear_model_scales_linearly(backend):
    layers = [
        {"id": "c1", "kind": "conv2d", "out_channels": 4, "kernel": 3, "padding": "same", "bias": False},
        {"id": "c2", "kind": "conv2d", "out_channels": 2, "kernel": 1, "padding": "same", "bias": False},
    ]
    rng = np.random.default_rng(22)
    entries = {"c1.weight": _rand(rng, 4, 1, 3, 3), "c2.weight": _rand(rng, 2, 4, 1, 1)}
    model = _model(layers, (1, 8, 8), entries)
    x = _rand(rng, 1, 8, 8)
    a = np.float32(3.5)
    lhs = predict(model, a * x)
    rhs = a * predict(model, x)
    assert oracles.rel_err(lhs, rhs) <= 1e-4


def test_softmax_channel_sums_to_one(backend):
    layers = [
        {"id": "c", "kind": "conv2d", "out_channels": 3, "kernel": 1, "padding": "same"},
        {"id": "s", "kind": "activation", "fn": "softmax"},
    ]
    rng = np.random.default_rng(23)
    entries = {"c.weight": _rand(rng, 3, 1, 1, 1), "c.bias": _rand(rng, 3)}
    model = _model(layers, (1, 5, 5), entries)
    out = predict(model, _rand(rng, 1, 5, 5))
    assert np.all(out >= 0) and np.all(out <= 1)
    assert np.allclose(out.sum(axis=0), 1.0, atol=1e-5)


def test_backend_parity():
    """Both kernel paths agree on a full random network."""
    if len(kernels.available_backends()) < 2:
        pytest.skip("only one backend available")
    rng = random.Random(24)
    net = random_network(rng, with_head=True)
    store = WeightStore(random_weights_for(net, rng))
    model = create_model(net, store)
    x = np.random.default_rng(9).random(net.input_shape.dims, np.float32)
    previous = kernels.active_backend()
    try:
        kernels.set_backend("numpy")
        a = predict(model, x)
        kernels.set_backend("numba")
        b = predict(model, x)
    finally:
        kernels.set_backend(previous)
    assert oracles.rel_err(a, b) <= 1e-5
