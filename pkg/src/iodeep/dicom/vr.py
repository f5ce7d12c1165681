"""Supported value representations and their wire properties.

Each VR maps to exactly one (length-field width, padding byte, value kind)
triple. Anything outside this table is rejected at encode/decode time.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Kind(Enum):
    """What Python values an element of this VR carries."""

    TEXT = "text"             # tuple[str], backslash-joined on the wire
    SINGLE_TEXT = "single_text"   # one str, backslash is ordinary content
    DECIMAL_TEXT = "decimal_text"  # tuple[float] rendered as decimal strings
    INTEGER_TEXT = "integer_text"  # tuple[int] rendered as integer strings
    U16 = "u16"               # tuple[int], binary little-endian
    U32 = "u32"
    F32 = "f32"               # tuple[float], IEEE-754 little-endian
    F64 = "f64"
    BYTES = "bytes"           # raw bytes payload
    SEQUENCE = "sequence"     # tuple[DataSet]


@dataclass(frozen=True)
class VRInfo:
    code: str
    long_form: bool   # True: 2 reserved bytes + u32 length; False: u16 length
    pad: bytes        # byte appended when the encoded value length is odd
    kind: Kind


_SPACE = b" "
_NUL = b"\x00"

_TABLE = {
    "UT": VRInfo("UT", True, _SPACE, Kind.SINGLE_TEXT),
    "PN": VRInfo("PN", False, _SPACE, Kind.TEXT),
    "UI": VRInfo("UI", False, _NUL, Kind.TEXT),
    "CS": VRInfo("CS", False, _SPACE, Kind.TEXT),
    "US": VRInfo("US", False, _NUL, Kind.U16),
    "UL": VRInfo("UL", False, _NUL, Kind.U32),
    "SQ": VRInfo("SQ", True, _NUL, Kind.SEQUENCE),
    "DS": VRInfo("DS", False, _SPACE, Kind.DECIMAL_TEXT),
    "IS": VRInfo("IS", False, _SPACE, Kind.INTEGER_TEXT),
    "LO": VRInfo("LO", False, _SPACE, Kind.TEXT),
    "SH": VRInfo("SH", False, _SPACE, Kind.TEXT),
    "DA": VRInfo("DA", False, _SPACE, Kind.TEXT),
    "TM": VRInfo("TM", False, _SPACE, Kind.TEXT),
    "OB": VRInfo("OB", True, _NUL, Kind.BYTES),
    "OW": VRInfo("OW", True, _NUL, Kind.BYTES),
    "FL": VRInfo("FL", False, _NUL, Kind.F32),
    "FD": VRInfo("FD", False, _NUL, Kind.F64),
}

SUPPORTED_VRS = frozenset(_TABLE)

# All two-letter codes defined by the standard; used to tell "valid VR we
# do not support" apart from garbage bytes in a stream.
KNOWN_VR_CODES = frozenset({
    "AE", "AS", "AT", "CS", "DA", "DS", "DT", "FL", "FD", "IS", "LO", "LT",
    "OB", "OD", "OF", "OL", "OV", "OW", "PN", "SH", "SL", "SQ", "SS", "ST",
    "SV", "TM", "UC", "UI", "UL", "UN", "UR", "US", "UT", "UV",
})


class VR:
    """Namespace-style accessor: ``VR.US``, ``VR.get("US")``."""

    @staticmethod
    def get(code: str) -> VRInfo:
        try:
            return _TABLE[code]
        except KeyError:
            from ..errors import UnsupportedVR
            raise UnsupportedVR(f"VR {code!r} is outside the supported set") from None


for _code, _info in _TABLE.items():
    setattr(VR, _code, _info)
