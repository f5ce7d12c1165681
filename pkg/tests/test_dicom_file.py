"""Part-10 file wrapper tests."""

import pytest

from iodeep.dicom import DataSet, DicomFile, read_file, write_file, tags, uids
from iodeep.errors import NotDicom, UnsupportedTransferSyntax


def _body():
    ds = DataSet()
    ds.put(tags.SOP_CLASS_UID, "UI", uids.SECONDARY_CAPTURE_STORAGE)
    ds.put(tags.SOP_INSTANCE_UID, "UI", "1.2.3.4")
    ds.put(tags.MODALITY, "CS", "OT")
    return ds


def test_write_read_round_trip(tmp_path):
    path = tmp_path / "x.dcm"
    f = DicomFile(_body())
    write_file(f, path)
    back = read_file(path)
    assert back.body == f.body
    assert back.file_meta == f.file_meta
    assert back.to_bytes() == f.to_bytes()


def test_write_read_byte_identical(tmp_path):
    path = tmp_path / "x.dcm"
    write_file(DicomFile(_body()), path)
    data = path.read_bytes()
    back = read_file(path)
    write_file(back, path)
    assert path.read_bytes() == data


def test_meta_mirrors_body_uids():
    f = DicomFile(_body())
    assert f.file_meta.text(tags.MEDIA_SOP_INSTANCE_UID) == "1.2.3.4"
    assert f.file_meta.text(tags.MEDIA_SOP_CLASS_UID) == uids.SECONDARY_CAPTURE_STORAGE
    assert f.transfer_syntax == uids.EXPLICIT_VR_LITTLE_ENDIAN


def test_not_dicom(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"\x00" * 131)
    with pytest.raises(NotDicom):
        read_file(path)
    path.write_bytes(b"\x00" * 128 + b"DICX" + b"\x00" * 16)
    with pytest.raises(NotDicom):
        read_file(path)


def test_unsupported_transfer_syntax_in_meta(tmp_path):
    from iodeep.dicom.codec import _encode_elements

    f = DicomFile(_body())
    f.file_meta.put(tags.TRANSFER_SYNTAX_UID, "UI", "1.2.840.10008.1.2")  # implicit VR
    blob = f.preamble + b"DICM" + _encode_elements(f.file_meta)
    path = tmp_path / "implicit.dcm"
    path.write_bytes(blob)
    with pytest.raises(UnsupportedTransferSyntax):
        read_file(path)


def test_preamble_must_be_128():
    with pytest.raises(ValueError):
        DicomFile(_body(), preamble=b"\x00" * 100)
