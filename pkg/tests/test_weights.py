"""Weights container tests."""

import struct

import numpy as np
import pytest

from iodeep.engine import (
    WeightStore,
    dump_weights,
    inline_weights_uri,
    load_weights,
    parse_weights,
    save_weights,
)
from iodeep.errors import ChecksumMismatch, FormatVersionUnsupported, WeightsNotFound


def test_single_entry_count_arithmetic():
    store = WeightStore({"c1.weight": np.arange(18, dtype=np.float32).reshape(2, 1, 3, 3)})
    back = parse_weights(dump_weights(store))
    assert len(back) == 1
    arr = back.get("c1.weight")
    assert arr.shape == (2, 1, 3, 3)
    assert arr.size == 18
    assert np.array_equal(arr, store.get("c1.weight"))


def test_truncated_container_checksum():
    blob = dump_weights(WeightStore({"w": np.ones(4, np.float32)}))
    with pytest.raises(ChecksumMismatch):
        parse_weights(blob[:-3])
    with pytest.raises(ChecksumMismatch):
        parse_weights(blob[:10])


def test_flipped_byte_checksum():
    blob = bytearray(dump_weights(WeightStore({"w": np.ones(4, np.float32)})))
    blob[12] ^= 0xFF
    with pytest.raises(ChecksumMismatch):
        parse_weights(bytes(blob))


def test_save_load_byte_identical(tmp_path):
    store = WeightStore({
        "a.weight": np.random.default_rng(0).normal(size=(3, 2, 3, 3)).astype(np.float32),
        "a.bias": np.zeros(3, np.float32),
    })
    path = tmp_path / "w.iodw"
    save_weights(store, path)
    original = path.read_bytes()
    save_weights(load_weights(path), path)
    assert path.read_bytes() == original


def test_version_gate():
    blob = bytearray(dump_weights(WeightStore({})))
    struct.pack_into("<H", blob, 4, 99)
    body = bytes(blob[:-4])
    import zlib
    patched = body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)
    with pytest.raises(FormatVersionUnsupported):
        parse_weights(patched)


def test_missing_file():
    with pytest.raises(WeightsNotFound):
        load_weights("/nonexistent/weights.iodw")


def test_inline_data_uri_round_trip():
    store = WeightStore({"k": np.arange(6, dtype=np.float32).reshape(2, 3)})
    uri = inline_weights_uri(store)
    assert uri.startswith("data:application/octet-stream;base64,")
    assert load_weights(uri) == store


def test_entry_order_preserved():
    store = WeightStore()
    store.put("z.weight", np.zeros(2, np.float32))
    store.put("a.weight", np.ones(2, np.float32))
    back = parse_weights(dump_weights(store))
    assert back.names() == ("z.weight", "a.weight")
