"""In-memory data elements and ordered data sets."""

from __future__ import annotations

import struct
from typing import Iterator, Union

from .tags import Tag
from .vr import VR, Kind, VRInfo

TextLike = Union[str, tuple, list]


def format_decimal(v: float) -> str:
    """Render a float as a DICOM decimal string.

    repr() gives the shortest round-tripping form; fall back to %.10g when
    that would exceed the 16-byte DS limit.
    """
    s = repr(float(v))
    if len(s) > 16:
        s = f"{float(v):.10g}"
    return s


def _normalize(info: VRInfo, value) -> object:
    """Coerce a user-supplied value into the element's canonical form.

    Canonical values survive an encode/decode round trip unchanged: text is
    stripped of insignificant trailing padding, FL/DS values are quantized
    to what their wire form can carry.
    """
    kind = info.kind
    pad_ch = info.pad.decode()
    if kind is Kind.SINGLE_TEXT:
        if not isinstance(value, str):
            raise TypeError(f"{info.code} expects a single string")
        return value.rstrip(pad_ch)
    if kind is Kind.TEXT:
        if isinstance(value, str):
            value = (value,)
        items = tuple(str(v).rstrip(pad_ch) for v in value)
        # a lone empty component and an absent value share one wire form
        return () if items == ("",) else items
    if kind is Kind.DECIMAL_TEXT:
        if isinstance(value, (int, float)):
            value = (value,)
        return tuple(float(format_decimal(v)) for v in value)
    if kind in (Kind.INTEGER_TEXT, Kind.U16, Kind.U32):
        if isinstance(value, int):
            value = (value,)
        items = tuple(int(v) for v in value)
        if kind is Kind.U16 and not all(0 <= v <= 0xFFFF for v in items):
            raise ValueError("US value out of 16-bit range")
        if kind is Kind.U32 and not all(0 <= v <= 0xFFFFFFFF for v in items):
            raise ValueError("UL value out of 32-bit range")
        return items
    if kind is Kind.F32:
        if isinstance(value, (int, float)):
            value = (value,)
        # quantize to binary32 so stored value == decoded value
        return tuple(struct.unpack("<f", struct.pack("<f", float(v)))[0] for v in value)
    if kind is Kind.F64:
        if isinstance(value, (int, float)):
            value = (value,)
        return tuple(float(v) for v in value)
    if kind is Kind.BYTES:
        if not isinstance(value, (bytes, bytearray, memoryview)):
            raise TypeError(f"{info.code} expects bytes")
        raw = bytes(value)
        # binary payloads are NUL-padded to even length on the wire; keep
        # the stored value identical to what a decoder will hand back
        return raw + b"\x00" if len(raw) % 2 else raw
    if kind is Kind.SEQUENCE:
        items = tuple(value)
        for item in items:
            if not isinstance(item, DataSet):
                raise TypeError("SQ expects DataSet items")
        return items
    raise AssertionError(kind)


class DataElement:
    """One tag/VR/value triple. Immutable after construction."""

    __slots__ = ("tag", "vr", "value")

    def __init__(self, tag: Tag, vr: str | VRInfo, value):
        info = vr if isinstance(vr, VRInfo) else VR.get(vr)
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "vr", info)
        object.__setattr__(self, "value", _normalize(info, value))

    def __setattr__(self, name, value):
        raise AttributeError("DataElement is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, DataElement):
            return NotImplemented
        return (self.tag, self.vr.code, self.value) == (other.tag, other.vr.code, other.value)

    def __hash__(self):
        return hash((self.tag, self.vr.code))

    @property
    def is_empty(self) -> bool:
        v = self.value
        return v == () or v == b"" or v == ""

    def first(self, default=None):
        """First value of a multi-valued element, or the scalar itself."""
        v = self.value
        if isinstance(v, tuple):
            return v[0] if v else default
        if v in ("", b""):
            return default
        return v

    def __repr__(self) -> str:
        v = self.value
        shown = v if not isinstance(v, bytes) else f"<{len(v)} bytes>"
        return f"{self.tag} {self.vr.code} {shown!r}"


class DataSet:
    """Ordered map Tag -> DataElement.

    Iteration always yields elements in ascending tag order; inserting a
    duplicate tag replaces the prior element.
    """

    def __init__(self, elements=()):
        self._elements: dict[Tag, DataElement] = {}
        for el in elements:
            self.add(el)

    def add(self, element: DataElement) -> None:
        self._elements[element.tag] = element

    def put(self, tag: Tag, vr: str, value) -> DataElement:
        el = DataElement(tag, vr, value)
        self.add(el)
        return el

    def remove(self, tag: Tag) -> None:
        self._elements.pop(tag, None)

    def get(self, tag: Tag, default=None):
        return self._elements.get(tag, default)

    def __getitem__(self, tag: Tag) -> DataElement:
        return self._elements[tag]

    def __contains__(self, tag: Tag) -> bool:
        return tag in self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[DataElement]:
        for tag in sorted(self._elements):
            yield self._elements[tag]

    def tags(self) -> list[Tag]:
        return sorted(self._elements)

    # Typed accessors -------------------------------------------------

    def text(self, tag: Tag, default: str | None = "") -> str | None:
        """First text value; default when the tag is absent or empty."""
        el = self.get(tag)
        if el is None or el.is_empty:
            return default
        return str(el.first())

    def texts(self, tag: Tag) -> tuple[str, ...]:
        el = self.get(tag)
        return tuple(el.value) if el is not None else ()

    def int(self, tag: Tag, default: int | None = None) -> int | None:
        el = self.get(tag)
        if el is None or el.is_empty:
            return default
        return int(el.first())

    def floats(self, tag: Tag) -> tuple[float, ...]:
        el = self.get(tag)
        return tuple(float(v) for v in el.value) if el is not None else ()

    def raw(self, tag: Tag) -> bytes:
        el = self.get(tag)
        return el.value if el is not None else b""

    def sequence(self, tag: Tag) -> tuple["DataSet", ...]:
        el = self.get(tag)
        return el.value if el is not None else ()

    def __eq__(self, other) -> bool:
        if not isinstance(other, DataSet):
            return NotImplemented
        return list(self) == list(other)

    def __repr__(self) -> str:
        return f"DataSet({len(self)} elements)"
