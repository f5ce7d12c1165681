"""Explicit VR Little Endian dataset codec.

Encoding is deterministic: elements are written in ascending tag order,
every value occupies an even number of bytes, and sequences carry explicit
lengths, so byte streams are canonical for a given DataSet.
"""

from __future__ import annotations

import struct
import warnings

from ..errors import (
    NonMonotonicTagsWarning,
    OddGroupWithoutPrivateCreator,
    TruncatedStream,
    UnknownVR,
    UnsupportedTransferSyntax,
    UnsupportedVR,
)
from .dataset import DataElement, DataSet, format_decimal
from .tags import ITEM, Tag
from .vr import SUPPORTED_VRS, KNOWN_VR_CODES, VR, Kind
from . import uids

_UNDEFINED = 0xFFFFFFFF


def _check_syntax(syntax: str) -> None:
    if syntax != uids.EXPLICIT_VR_LITTLE_ENDIAN:
        raise UnsupportedTransferSyntax(f"unsupported transfer syntax {syntax!r}")


def _value_bytes(el: DataElement) -> bytes:
    kind = el.vr.kind
    v = el.value
    if kind is Kind.SINGLE_TEXT:
        raw = v.encode("utf-8")
    elif kind is Kind.TEXT:
        raw = "\\".join(v).encode("utf-8")
    elif kind is Kind.DECIMAL_TEXT:
        raw = "\\".join(format_decimal(x) for x in v).encode("ascii")
    elif kind is Kind.INTEGER_TEXT:
        raw = "\\".join(str(x) for x in v).encode("ascii")
    elif kind is Kind.U16:
        raw = struct.pack(f"<{len(v)}H", *v)
    elif kind is Kind.U32:
        raw = struct.pack(f"<{len(v)}I", *v)
    elif kind is Kind.F32:
        raw = struct.pack(f"<{len(v)}f", *v)
    elif kind is Kind.F64:
        raw = struct.pack(f"<{len(v)}d", *v)
    elif kind is Kind.BYTES:
        raw = v
    elif kind is Kind.SEQUENCE:
        parts = []
        for item in v:
            body = _encode_elements(item)
            parts.append(struct.pack("<HHI", ITEM.group, ITEM.element, len(body)))
            parts.append(body)
        raw = b"".join(parts)
    else:  # pragma: no cover
        raise AssertionError(kind)
    if len(raw) % 2:
        raw += el.vr.pad
    return raw


def _encode_element(el: DataElement) -> bytes:
    value = _value_bytes(el)
    head = struct.pack("<HH", el.tag.group, el.tag.element) + el.vr.code.encode("ascii")
    if el.vr.long_form:
        if len(value) > 0xFFFFFFFE:
            raise ValueError(f"{el.tag}: value too long")
        return head + b"\x00\x00" + struct.pack("<I", len(value)) + value
    if len(value) > 0xFFFF:
        raise ValueError(f"{el.tag}: value too long for a 16-bit length field")
    return head + struct.pack("<H", len(value)) + value


def _check_private_creators(ds: DataSet) -> None:
    for el in ds:
        tag = el.tag
        if tag.is_private and tag.element >= 0x1000:
            creator = Tag(tag.group, tag.element >> 8)
            if creator not in ds:
                raise OddGroupWithoutPrivateCreator(
                    f"{tag} has no private creator at {creator}")
        if el.vr.kind is Kind.SEQUENCE:
            for item in el.value:
                _check_private_creators(item)


def _encode_elements(ds: DataSet) -> bytes:
    return b"".join(_encode_element(el) for el in ds)


def encode_dataset(ds: DataSet, syntax: str = uids.EXPLICIT_VR_LITTLE_ENDIAN) -> bytes:
    """Serialize a DataSet to its canonical explicit-VR-LE byte stream."""
    _check_syntax(syntax)
    _check_private_creators(ds)
    return _encode_elements(ds)


# --- decoding -------------------------------------------------------------


def _need(buf: bytes, pos: int, n: int, what: str) -> None:
    if pos + n > len(buf):
        raise TruncatedStream(f"stream ended inside {what} at offset {pos}")


def _parse_value(vr_code: str, raw: bytes):
    info = VR.get(vr_code)
    kind = info.kind
    pad_ch = info.pad.decode()
    if kind is Kind.SINGLE_TEXT:
        return raw.decode("utf-8").rstrip(pad_ch)
    if kind is Kind.TEXT:
        if not raw:
            return ()
        text = raw.decode("utf-8")
        # strip the even-length pad; UI pads with NUL, the rest with space
        text = text.rstrip(pad_ch)
        return tuple(part.rstrip(pad_ch) for part in text.split("\\")) if text else ()
    if kind is Kind.DECIMAL_TEXT:
        text = raw.decode("ascii").strip(" \x00")
        return tuple(float(p) for p in text.split("\\")) if text else ()
    if kind is Kind.INTEGER_TEXT:
        text = raw.decode("ascii").strip(" \x00")
        return tuple(int(p) for p in text.split("\\")) if text else ()
    if kind is Kind.U16:
        if len(raw) % 2:
            raise TruncatedStream("US value length not a multiple of 2")
        return struct.unpack(f"<{len(raw) // 2}H", raw)
    if kind is Kind.U32:
        if len(raw) % 4:
            raise TruncatedStream("UL value length not a multiple of 4")
        return struct.unpack(f"<{len(raw) // 4}I", raw)
    if kind is Kind.F32:
        if len(raw) % 4:
            raise TruncatedStream("FL value length not a multiple of 4")
        return struct.unpack(f"<{len(raw) // 4}f", raw)
    if kind is Kind.F64:
        if len(raw) % 8:
            raise TruncatedStream("FD value length not a multiple of 8")
        return struct.unpack(f"<{len(raw) // 8}d", raw)
    if kind is Kind.BYTES:
        return raw
    raise AssertionError(kind)  # pragma: no cover


def _decode_sequence(raw: bytes) -> tuple[DataSet, ...]:
    items = []
    pos = 0
    while pos < len(raw):
        _need(raw, pos, 8, "sequence item header")
        group, element, length = struct.unpack_from("<HHI", raw, pos)
        pos += 8
        if (group, element) != ITEM.key:
            raise TruncatedStream(
                f"expected sequence item tag, found ({group:04X},{element:04X})")
        if length == _UNDEFINED:
            raise UnsupportedTransferSyntax("undefined-length sequence items not supported")
        _need(raw, pos, length, "sequence item")
        items.append(_decode_to_dataset(raw[pos:pos + length]))
        pos += length
    return tuple(items)


def decode_elements(buf: bytes, pos: int, end: int, stop_group: int | None = None):
    """Decode elements from buf[pos:end]; optionally stop before a group.

    Returns (elements, new_pos). Elements keep stream order so the caller
    can spot non-monotonic streams.
    """
    elements: list[DataElement] = []
    while pos < end:
        if stop_group is not None:
            _need(buf, pos, 2, "element tag")
            group = struct.unpack_from("<H", buf, pos)[0]
            if group >= stop_group:
                break
        _need(buf, pos, 6, "element header")
        group, element = struct.unpack_from("<HH", buf, pos)
        vr_code = buf[pos + 4:pos + 6].decode("ascii", errors="replace")
        pos += 6
        if vr_code not in KNOWN_VR_CODES:
            raise UnknownVR(f"({group:04X},{element:04X}): unknown VR {vr_code!r}")
        if vr_code not in SUPPORTED_VRS:
            raise UnsupportedVR(f"({group:04X},{element:04X}): VR {vr_code!r} not supported")
        info = VR.get(vr_code)
        if info.long_form:
            _need(buf, pos, 6, "element length")
            length = struct.unpack_from("<I", buf, pos + 2)[0]
            pos += 6
        else:
            _need(buf, pos, 2, "element length")
            length = struct.unpack_from("<H", buf, pos)[0]
            pos += 2
        if length == _UNDEFINED:
            raise UnsupportedTransferSyntax("undefined-length elements not supported")
        _need(buf, pos, length, f"value of ({group:04X},{element:04X})")
        raw = bytes(buf[pos:pos + length])
        pos += length
        tag = Tag(group, element)
        if info.kind is Kind.SEQUENCE:
            value = _decode_sequence(raw)
        else:
            value = _parse_value(vr_code, raw)
        elements.append(DataElement(tag, vr_code, value))
    return elements, pos


def _decode_to_dataset(buf: bytes) -> DataSet:
    elements, _ = decode_elements(buf, 0, len(buf))
    last = None
    for el in elements:
        if last is not None and el.tag <= last:
            warnings.warn(
                f"tags out of ascending order: {el.tag} after {last}",
                NonMonotonicTagsWarning,
                stacklevel=3,
            )
        last = el.tag
    return DataSet(elements)


def decode_dataset(data: bytes, syntax: str = uids.EXPLICIT_VR_LITTLE_ENDIAN) -> DataSet:
    """Parse an explicit-VR-LE byte stream back into a DataSet."""
    _check_syntax(syntax)
    return _decode_to_dataset(bytes(data))
