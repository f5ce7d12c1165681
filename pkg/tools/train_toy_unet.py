#!/usr/bin/env python3
"""Train the toy Unet on the synthetic blob generator and freeze assets.

This runs offline (not during tests): it trains a small encoder/decoder
net with one skip connection using numpy gradients written out by hand,
verifies the result through the shipped inference engine, and writes

    src/iodeep/assets/toy_unet.json
    src/iodeep/assets/toy_unet.iodw

Usage: python tools/train_toy_unet.py [--steps N] [--seed S]
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from iodeep.engine import WeightStore, create_model, predict, save_weights  # noqa: E402
from iodeep.netdesc import parse_architecture  # noqa: E402
from iodeep.synthetic import dice, make_blob_field  # noqa: E402

ARCH = {
    "input_shape": [1, 64, 64],
    "architecture": [
        {"id": "c1", "kind": "conv2d", "out_channels": 8, "kernel": 3, "stride": 1, "padding": "same"},
        {"id": "r1", "kind": "activation", "fn": "relu"},
        {"id": "p1", "kind": "max_pool2d", "kernel": 2, "stride": 2},
        {"id": "c2", "kind": "conv2d", "out_channels": 16, "kernel": 3, "stride": 1, "padding": "same"},
        {"id": "r2", "kind": "activation", "fn": "relu"},
        {"id": "t1", "kind": "transposed_conv2d", "out_channels": 8, "kernel": 2, "stride": 2, "padding": "valid"},
        {"id": "m1", "kind": "concat"},
        {"id": "c3", "kind": "conv2d", "out_channels": 8, "kernel": 3, "stride": 1, "padding": "same"},
        {"id": "r3", "kind": "activation", "fn": "relu"},
        {"id": "c4", "kind": "conv2d", "out_channels": 1, "kernel": 1, "stride": 1, "padding": "same"},
        {"id": "s1", "kind": "activation", "fn": "sigmoid"},
    ],
    "skip_connections": [{"from": "r1", "to": "m1"}],
}


# --- minimal conv autodiff ----------------------------------------------------

def im2col(x, k):
    c, h, w = x.shape
    p = (k - 1) // 2
    xp = np.pad(x, ((0, 0), (p, p), (p, p)))
    cols = np.empty((c * k * k, h * w), dtype=np.float64)
    idx = 0
    for ci in range(c):
        for u in range(k):
            for v in range(k):
                cols[idx] = xp[ci, u:u + h, v:v + w].reshape(-1)
                idx += 1
    return cols


def col2im(cols, shape, k):
    c, h, w = shape
    p = (k - 1) // 2
    xp = np.zeros((c, h + 2 * p, w + 2 * p), dtype=np.float64)
    idx = 0
    for ci in range(c):
        for u in range(k):
            for v in range(k):
                xp[ci, u:u + h, v:v + w] += cols[idx].reshape(h, w)
                idx += 1
    return xp[:, p:p + h, p:p + w]


class Conv:
    """3x3/1x1 same-padding stride-1 convolution with bias."""

    def __init__(self, rng, c_in, c_out, k):
        scale = np.sqrt(2.0 / (c_in * k * k))
        self.w = rng.normal(0, scale, size=(c_out, c_in, k, k))
        self.b = np.zeros(c_out)
        self.k = k

    def forward(self, x):
        self.x_shape = x.shape
        self.cols = im2col(x, self.k)
        o = self.w.shape[0]
        out = self.w.reshape(o, -1) @ self.cols + self.b[:, None]
        return out.reshape(o, *x.shape[1:])

    def backward(self, dout):
        o = self.w.shape[0]
        dflat = dout.reshape(o, -1)
        self.dw = (dflat @ self.cols.T).reshape(self.w.shape)
        self.db = dflat.sum(axis=1)
        dcols = self.w.reshape(o, -1).T @ dflat
        return col2im(dcols, self.x_shape, self.k)


class MaxPool2:
    def forward(self, x):
        c, h, w = x.shape
        xr = x.reshape(c, h // 2, 2, w // 2, 2).transpose(0, 1, 3, 2, 4).reshape(c, h // 2, w // 2, 4)
        self.idx = xr.argmax(axis=3)
        self.in_shape = x.shape
        return np.take_along_axis(xr, self.idx[..., None], axis=3)[..., 0]

    def backward(self, dout):
        c, h, w = self.in_shape
        dxr = np.zeros((c, h // 2, w // 2, 4), dtype=np.float64)
        np.put_along_axis(dxr, self.idx[..., None], dout[..., None], axis=3)
        return dxr.reshape(c, h // 2, w // 2, 2, 2).transpose(0, 1, 3, 2, 4).reshape(c, h, w)


class TConv2:
    """2x2 stride-2 transposed convolution with bias."""

    def __init__(self, rng, c_in, c_out):
        scale = np.sqrt(2.0 / (c_in * 4))
        self.w = rng.normal(0, scale, size=(c_out, c_in, 2, 2))
        self.b = np.zeros(c_out)

    def forward(self, x):
        self.x = x
        c, h, w = x.shape
        o = self.w.shape[0]
        out = np.zeros((o, h * 2, w * 2), dtype=np.float64)
        for u in range(2):
            for v in range(2):
                out[:, u::2, v::2] += np.tensordot(self.w[:, :, u, v], x, axes=([1], [0]))
        return out + self.b[:, None, None]

    def backward(self, dout):
        x = self.x
        self.dw = np.zeros_like(self.w)
        dx = np.zeros_like(x)
        for u in range(2):
            for v in range(2):
                dsub = dout[:, u::2, v::2]
                self.dw[:, :, u, v] = np.tensordot(dsub, x, axes=([1, 2], [1, 2]))
                dx += np.tensordot(self.w[:, :, u, v].T, dsub, axes=([1], [0]))
        self.db = dout.sum(axis=(1, 2))
        return dx


class Net:
    def __init__(self, seed):
        rng = np.random.default_rng(seed)
        self.c1 = Conv(rng, 1, 8, 3)
        self.c2 = Conv(rng, 8, 16, 3)
        self.t1 = TConv2(rng, 16, 8)
        self.c3 = Conv(rng, 16, 8, 3)
        self.c4 = Conv(rng, 8, 1, 1)
        self.pool = MaxPool2()
        self.params = []
        for layer in (self.c1, self.c2, self.t1, self.c3, self.c4):
            self.params += [(layer, "w"), (layer, "b")]

    def forward(self, x):
        self.a1 = np.maximum(self.c1.forward(x), 0)
        self.m1 = self.a1 > 0
        z = self.pool.forward(self.a1)
        self.a2 = np.maximum(self.c2.forward(z), 0)
        self.m2 = self.a2 > 0
        up = self.t1.forward(self.a2)
        cat = np.concatenate([up, self.a1], axis=0)
        self.a3 = np.maximum(self.c3.forward(cat), 0)
        self.m3 = self.a3 > 0
        logits = self.c4.forward(self.a3)
        return logits

    def backward(self, dlogits):
        d3 = self.c4.backward(dlogits) * self.m3
        dcat = self.c3.backward(d3)
        dup, dskip = dcat[:8], dcat[8:]
        d2 = self.t1.backward(dup) * self.m2
        dz = self.c2.backward(d2)
        d1 = self.pool.backward(dz)
        d1 = (d1 + dskip) * self.m1
        self.c1.backward(d1)


def train(steps, seed):
    rng = np.random.default_rng(seed)
    net = Net(seed)
    adam_m = [np.zeros_like(getattr(l, n)) for l, n in net.params]
    adam_v = [np.zeros_like(getattr(l, n)) for l, n in net.params]
    lr, b1, b2, eps = 2e-3, 0.9, 0.999, 1e-8
    t = 0
    batch = 8
    for step in range(1, steps + 1):
        grads = [np.zeros_like(getattr(l, n)) for l, n in net.params]
        loss = 0.0
        for _ in range(batch):
            phantom = make_blob_field(rng)
            x = (phantom.image.astype(np.float64) / 255.0)[None]
            y = phantom.ground_truth.astype(np.float64)[None]
            logits = net.forward(x)
            p = 1.0 / (1.0 + np.exp(-logits))
            n = y.size
            loss += float(-(y * np.log(p + 1e-9) + (1 - y) * np.log(1 - p + 1e-9)).mean())
            net.backward((p - y) / n)
            for gi, (layer, name) in enumerate(net.params):
                grads[gi] += getattr(layer, "d" + name)
        t += 1
        for gi, (layer, name) in enumerate(net.params):
            g = grads[gi] / batch
            adam_m[gi] = b1 * adam_m[gi] + (1 - b1) * g
            adam_v[gi] = b2 * adam_v[gi] + (1 - b2) * g * g
            mhat = adam_m[gi] / (1 - b1**t)
            vhat = adam_v[gi] / (1 - b2**t)
            setattr(layer, name, getattr(layer, name) - lr * mhat / (np.sqrt(vhat) + eps))
        if step % 50 == 0 or step == steps:
            d = holdout_dice(net, seed=seed + 999)
            print(f"step {step:4d}  loss {loss / batch:.4f}  holdout dice {d:.4f}")
            if d >= 0.95 and step >= 150:
                break
    return net


def holdout_dice(net, seed, n=16):
    rng = np.random.default_rng(seed)
    num = den = 0
    for _ in range(n):
        phantom = make_blob_field(rng)
        x = (phantom.image.astype(np.float64) / 255.0)[None]
        p = 1.0 / (1.0 + np.exp(-net.forward(x)))
        pred = p[0] >= 0.5
        truth = phantom.ground_truth
        num += 2 * int((pred & truth).sum())
        den += int(pred.sum()) + int(truth.sum())
    return num / den if den else 1.0


def freeze(net, assets_dir: Path, seed):
    store = WeightStore()
    store.put("c1.weight", net.c1.w)
    store.put("c1.bias", net.c1.b)
    store.put("c2.weight", net.c2.w)
    store.put("c2.bias", net.c2.b)
    store.put("t1.weight", net.t1.w)
    store.put("t1.bias", net.t1.b)
    store.put("c3.weight", net.c3.w)
    store.put("c3.bias", net.c3.b)
    store.put("c4.weight", net.c4.w)
    store.put("c4.bias", net.c4.b)

    doc = json.dumps(ARCH, indent=2)
    descriptor = parse_architecture(doc)
    model = create_model(descriptor, store)

    # verification through the shipped engine, not the trainer's forward
    rng = np.random.default_rng(seed + 4242)
    num = den = 0
    for _ in range(24):
        phantom = make_blob_field(rng)
        x = (phantom.image.astype(np.float32) / np.float32(255.0))[None]
        mask = predict(model, x)[0] >= 0.5
        truth = phantom.ground_truth
        num += 2 * int((mask & truth).sum())
        den += int(mask.sum()) + int(truth.sum())
    engine_dice = num / den
    print(f"engine-verified dice over 24 fresh phantoms: {engine_dice:.4f}")
    if engine_dice < 0.9:
        raise SystemExit("trained network below the 0.9 dice bar; not freezing")

    assets_dir.mkdir(parents=True, exist_ok=True)
    (assets_dir / "toy_unet.json").write_text(doc + "\n", encoding="utf-8")
    save_weights(store, assets_dir / "toy_unet.iodw")
    print(f"assets written to {assets_dir}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=600)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parents[1]
                                             / "src" / "iodeep" / "assets"))
    args = parser.parse_args()
    net = train(args.steps, args.seed)
    freeze(net, Path(args.out), args.seed)


if __name__ == "__main__":
    main()
