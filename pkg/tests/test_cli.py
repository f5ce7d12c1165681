"""CLI tests: every path goes through the public HTTP API."""

import json

import numpy as np
import pytest

from iodeep.cli import EXIT_FAILURE, EXIT_NO_MATCHING_NETWORK, EXIT_OK, main
from iodeep.dicom import DicomFile, read_file, tags
from iodeep.engine import save_weights
from iodeep.iod import parse_iodeep
from iodeep.pacs import BackgroundServer
from iodeep.synthetic import make_blob_slice
from synth import detector_architecture, detector_weights


@pytest.fixture()
def server(tmp_path):
    with BackgroundServer(tmp_path / "store") as bg:
        yield bg


@pytest.fixture()
def packed(tmp_path):
    """A packed network file + weights blob on disk."""
    arch = tmp_path / "arch.json"
    arch.write_text(detector_architecture(), encoding="utf-8")
    weights = tmp_path / "weights.iodw"
    save_weights(detector_weights(), weights)
    out = tmp_path / "net.dcm"
    code = main(["pack", "--arch", str(arch), "--weights", str(weights),
                 "--name", "Blob detector", "--modality", "MR",
                 "--body-part", "PHANTOM", "--samples", "1",
                 "--photometric", "MONOCHROME2", "--out", str(out)])
    assert code == EXIT_OK
    desc = parse_iodeep(read_file(out).body)
    return out, out.with_name(f"{desc.dnn_uid}.iodw"), desc


def test_pack_produces_valid_instance(packed, capsys):
    out, weights_blob, desc = packed
    assert out.exists() and weights_blob.exists()
    assert desc.dnn_name == "Blob detector"
    assert desc.modality == "MR"
    assert desc.dnn_weights == f"iodeep:weights/{desc.dnn_uid}"


def test_pack_rejects_inconsistent_pixel_spec(tmp_path, capsys):
    arch = tmp_path / "arch.json"
    arch.write_text(detector_architecture(), encoding="utf-8")
    weights = tmp_path / "weights.iodw"
    save_weights(detector_weights(), weights)
    code = main(["pack", "--arch", str(arch), "--weights", str(weights),
                 "--name", "x", "--modality", "MR", "--body-part", "PHANTOM",
                 "--samples", "3", "--photometric", "MONOCHROME2",
                 "--out", str(tmp_path / "bad.dcm")])
    assert code == EXIT_FAILURE
    assert "error:" in capsys.readouterr().err


def test_import_ls_predict_validate_flow(server, packed, tmp_path, capsys):
    out, weights_blob, desc = packed
    slices = []
    for i in range(3):
        ds, phantom = make_blob_slice(np.random.default_rng(40 + i), n_blobs=2)
        path = tmp_path / f"slice{i}.dcm"
        path.write_bytes(DicomFile(ds).to_bytes())
        slices.append((path, ds, phantom))

    files = [str(out), str(weights_blob)] + [str(p) for p, _, _ in slices]
    assert main(["import", "--server", server.url, *files]) == EXIT_OK
    capsys.readouterr()

    assert main(["ls", "--server", server.url, "--level", "study"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)["rows"]
    # the packed network is its own zero-image study; phantoms share patient id
    assert len(rows) == 4

    slice_uid = slices[0][1].text(tags.SOP_INSTANCE_UID)
    rois_path = tmp_path / "rois.json"
    assert main(["predict", "--server", server.url, "--slice", slice_uid,
                 "--out", str(rois_path)]) == EXIT_OK
    capsys.readouterr()
    result = json.loads(rois_path.read_text())
    assert result["dnn_uid"] == desc.dnn_uid
    assert len(result["proposals"]) == 2
    frame_uid = slices[0][1].text(tags.FRAME_OF_REFERENCE_UID)
    assert all(p["slice_ref_uid"] == frame_uid for p in result["proposals"])

    decisions = [f"{p['id']}=accepted" for p in result["proposals"]]
    code = main(["validate", "--server", server.url,
                 "--session", result["session_id"], "--reviewer", "DOE^JANE",
                 *sum((["--decision", d] for d in decisions), [])])
    assert code == EXIT_OK
    stored_uid = json.loads(capsys.readouterr().out)["sop_instance_uid"]
    assert stored_uid


def test_predict_without_networks_exit_code(server, tmp_path, capsys):
    ds, _ = make_blob_slice(np.random.default_rng(50))
    path = tmp_path / "s.dcm"
    path.write_bytes(DicomFile(ds).to_bytes())
    assert main(["import", "--server", server.url, str(path)]) == EXIT_OK
    capsys.readouterr()
    slice_uid = ds.text(tags.SOP_INSTANCE_UID)
    code = main(["predict", "--server", server.url, "--slice", slice_uid])
    assert code == EXIT_NO_MATCHING_NETWORK
    assert "warning" in capsys.readouterr().err.lower()


def test_ls_instance_level_quiet(server, packed, capsys):
    out, weights_blob, _ = packed
    main(["import", "--server", server.url, str(out), str(weights_blob)])
    capsys.readouterr()
    assert main(["--quiet", "ls", "--server", server.url, "--level", "instance"]) == EXIT_OK
    text = capsys.readouterr().out
    assert "MR" in text


def test_inspect(packed, capsys):
    out, _, desc = packed
    assert main(["inspect", str(out)]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "network"
    assert payload["dnn_uid"] == desc.dnn_uid


def test_serve_exposes_extraction_knobs(tmp_path):
    """--threshold/--min-area reach the workflow behind the server."""
    from iodeep.cli import build_parser
    from iodeep.pacs.service import make_server

    args = build_parser().parse_args(
        ["serve", "--store", str(tmp_path), "--bind", "127.0.0.1:0",
         "--threshold", "0.7", "--min-area", "4"])
    assert args.threshold == 0.7
    assert args.min_area == 4
    server = make_server(tmp_path, threshold=args.threshold, min_area=args.min_area)
    try:
        assert server.service.workflow.threshold == 0.7
        assert server.service.workflow.min_area == 4
    finally:
        server.server_close()
