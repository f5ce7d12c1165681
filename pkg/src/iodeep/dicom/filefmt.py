"""DICOM Part-10 file wrapper: preamble, file meta, body."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from ..errors import IoFailure, NotDicom, UnsupportedTransferSyntax
from . import tags, uids
from .codec import decode_elements, encode_dataset, _encode_elements
from .dataset import DataSet

MAGIC = b"DICM"
PREAMBLE = b"\x00" * 128


def build_file_meta(body: DataSet) -> DataSet:
    """File meta group for a body dataset; always Explicit VR LE."""
    meta = DataSet()
    meta.put(tags.FILE_META_VERSION, "OB", b"\x00\x01")
    meta.put(tags.MEDIA_SOP_CLASS_UID, "UI", body.text(tags.SOP_CLASS_UID, ""))
    meta.put(tags.MEDIA_SOP_INSTANCE_UID, "UI", body.text(tags.SOP_INSTANCE_UID, ""))
    meta.put(tags.TRANSFER_SYNTAX_UID, "UI", uids.EXPLICIT_VR_LITTLE_ENDIAN)
    meta.put(tags.IMPLEMENTATION_CLASS_UID, "UI", uids.IMPLEMENTATION_CLASS)
    group_len = len(_encode_elements(meta))
    meta.put(tags.FILE_META_GROUP_LENGTH, "UL", group_len)
    return meta


@dataclass
class DicomFile:
    """A Part-10 file: 128-byte preamble + DICM + file meta + body."""

    body: DataSet
    file_meta: DataSet = field(default=None)  # type: ignore[assignment]
    preamble: bytes = PREAMBLE

    def __post_init__(self):
        if self.file_meta is None:
            self.file_meta = build_file_meta(self.body)
        if len(self.preamble) != 128:
            raise ValueError("preamble must be exactly 128 bytes")

    @property
    def transfer_syntax(self) -> str:
        return self.file_meta.text(tags.TRANSFER_SYNTAX_UID, "")

    @property
    def sop_instance_uid(self) -> str:
        return self.body.text(tags.SOP_INSTANCE_UID, "")

    def to_bytes(self) -> bytes:
        if self.transfer_syntax != uids.EXPLICIT_VR_LITTLE_ENDIAN:
            raise UnsupportedTransferSyntax(self.transfer_syntax)
        body_uid = self.body.text(tags.SOP_INSTANCE_UID, "")
        if body_uid and self.file_meta.text(tags.MEDIA_SOP_INSTANCE_UID, "") != body_uid:
            raise ValueError("file meta MediaStorageSOPInstanceUID differs from body SOPInstanceUID")
        return (
            self.preamble
            + MAGIC
            + _encode_elements(self.file_meta)
            + encode_dataset(self.body)
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "DicomFile":
        if len(data) < 132 or data[128:132] != MAGIC:
            raise NotDicom("missing 128-byte preamble + DICM magic")
        preamble = data[:128]
        meta_elements, pos = decode_elements(data, 132, len(data), stop_group=0x0003)
        meta = DataSet(meta_elements)
        syntax = meta.text(tags.TRANSFER_SYNTAX_UID, "")
        if syntax != uids.EXPLICIT_VR_LITTLE_ENDIAN:
            raise UnsupportedTransferSyntax(f"file declares transfer syntax {syntax!r}")
        body_elements, _ = decode_elements(data, pos, len(data))
        return cls(body=DataSet(body_elements), file_meta=meta, preamble=preamble)


def write_file(dcm: DicomFile, path) -> None:
    """Write atomically (temp file + rename)."""
    data = dcm.to_bytes()
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_file(path) -> DicomFile:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return DicomFile.from_bytes(data)
