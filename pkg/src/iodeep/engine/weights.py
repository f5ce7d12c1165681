"""Portable weights container (see docs/weights-format.md).

Layout, all little-endian:

    magic   4s   b"IODW"
    version u16  currently 1
    count   u32  number of entries
    entry*  name_len:u16, name:utf-8, rank:u8, dims:u32*rank, payload:f32*
    crc32   u32  over every preceding byte

Entry order is significant: save(load(f)) reproduces f byte for byte.
"""

from __future__ import annotations

import base64
import io
import struct
import zlib
from pathlib import Path

import numpy as np

from ..errors import ChecksumMismatch, FormatVersionUnsupported, WeightsNotFound

MAGIC = b"IODW"
VERSION = 1

_DATA_URI_PREFIX = "data:application/octet-stream;base64,"


class WeightStore:
    """Named float32 arrays, order-preserving."""

    def __init__(self, entries=None, format_version: int = VERSION):
        self.format_version = format_version
        self._entries: dict[str, np.ndarray] = {}
        if entries:
            for name, arr in (entries.items() if isinstance(entries, dict) else entries):
                self.put(name, arr)

    def put(self, name: str, arr: np.ndarray) -> None:
        self._entries[name] = np.ascontiguousarray(arr, dtype=np.float32)

    def get(self, name: str) -> np.ndarray | None:
        return self._entries.get(name)

    def names(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightStore):
            return NotImplemented
        if self.names() != other.names():
            return False
        return all(np.array_equal(self._entries[n], other._entries[n]) for n in self.names())

    def items(self):
        return self._entries.items()


def dump_weights(store: WeightStore) -> bytes:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(struct.pack("<HI", VERSION, len(store)))
    for name, arr in store.items():
        encoded = name.encode("utf-8")
        buf.write(struct.pack("<H", len(encoded)))
        buf.write(encoded)
        buf.write(struct.pack("<B", arr.ndim))
        buf.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
        buf.write(arr.astype("<f4", copy=False).tobytes())
    payload = buf.getvalue()
    return payload + struct.pack("<I", zlib.crc32(payload) & 0xFFFFFFFF)


def save_weights(store: WeightStore, path) -> None:
    Path(path).write_bytes(dump_weights(store))


def parse_weights(data: bytes) -> WeightStore:
    if len(data) < 14:
        raise ChecksumMismatch("container shorter than header + trailer")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) & 0xFFFFFFFF != crc:
        raise ChecksumMismatch("CRC32 mismatch")
    if body[:4] != MAGIC:
        raise ChecksumMismatch(f"bad magic {body[:4]!r}")
    version, count = struct.unpack_from("<HI", body, 4)
    if version > VERSION:
        raise FormatVersionUnsupported(f"container version {version} > {VERSION}")
    pos = 10
    store = WeightStore(format_version=version)
    try:
        for _ in range(count):
            (name_len,) = struct.unpack_from("<H", body, pos)
            pos += 2
            name = body[pos:pos + name_len].decode("utf-8")
            pos += name_len
            (rank,) = struct.unpack_from("<B", body, pos)
            pos += 1
            dims = struct.unpack_from(f"<{rank}I", body, pos)
            pos += 4 * rank
            volume = int(np.prod(dims)) if rank else 1
            arr = np.frombuffer(body, dtype="<f4", count=volume, offset=pos).reshape(dims)
            pos += 4 * volume
            store.put(name, arr)
    except (struct.error, ValueError) as exc:
        raise ChecksumMismatch(f"container structure damaged: {exc}") from exc
    if pos != len(body):
        raise ChecksumMismatch("trailing bytes after last entry")
    return store


def load_weights(locator) -> WeightStore:
    """Resolve a locator (bytes, data: URI, or file path) and parse it."""
    if isinstance(locator, (bytes, bytearray)):
        return parse_weights(bytes(locator))
    text = str(locator)
    if text.startswith(_DATA_URI_PREFIX):
        return parse_weights(base64.b64decode(text[len(_DATA_URI_PREFIX):]))
    path = Path(text[7:] if text.startswith("file://") else text)
    if not path.is_file():
        raise WeightsNotFound(f"no weights file at {path}")
    return parse_weights(path.read_bytes())


def inline_weights_uri(store: WeightStore) -> str:
    """Self-contained data: URI carrying the whole container."""
    return _DATA_URI_PREFIX + base64.b64encode(dump_weights(store)).decode("ascii")
