"""Operator command line.

Exit codes: 0 success, 1 operation failed, 2 bad usage (argparse),
3 no stored network matches the slice. Output is JSON on stdout unless
--quiet switches to terse human lines.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dicom import DicomFile, read_file, tags, uids, write_file
from .engine import create_model, load_weights
from .errors import IodeepError, NoMatchingNetwork
from .iod import IODeepDescriptor, build_iodeep, parse_iodeep
from .netdesc import parse_architecture
from .pacs.client import ApiError, PacsClient

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NO_MATCHING_NETWORK = 3

DEFAULT_BIND = "127.0.0.1:8042"


def _emit(args, payload: dict, human: str):
    if args.quiet:
        if human:
            print(human)
    else:
        print(json.dumps(payload, indent=2))


def _fail(message: str, code: int = EXIT_FAILURE) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


# --- commands ---------------------------------------------------------------


def cmd_pack(args) -> int:
    doc = Path(args.arch).read_text(encoding="utf-8")
    net = parse_architecture(doc)
    weights = load_weights(args.weights)
    create_model(net, weights)  # binding must hold before anything is written

    dnn_uid = uids.generate_uid()
    desc = IODeepDescriptor(
        dnn_architecture=doc,
        dnn_weights=f"iodeep:weights/{dnn_uid}",
        dnn_name=args.name,
        dnn_uid=dnn_uid,
        modality=args.modality,
        body_part_examined=args.body_part,
        photometric_interpretation=args.photometric,
        samples_per_pixel=args.samples,
    )
    ds = build_iodeep(desc)
    out = Path(args.out)
    write_file(DicomFile(ds), out)
    weights_out = out.with_name(f"{dnn_uid}.iodw")
    weights_out.write_bytes(Path(args.weights).read_bytes())
    _emit(args, {"dnn_uid": dnn_uid, "file": str(out), "weights": str(weights_out)},
          dnn_uid)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .pacs.service import serve

    host, _, port = args.bind.rpartition(":")
    serve(args.store, host or "127.0.0.1", int(port),
          threshold=args.threshold, min_area=args.min_area)
    return EXIT_OK


def cmd_import(args) -> int:
    client = PacsClient(args.server)
    results = []
    for name in args.files:
        path = Path(name)
        if path.suffix == ".iodw":
            dnn_uid = client.store_weights(path.stem, path.read_bytes())
            results.append({"file": name, "dnn_uid": dnn_uid, "kind": "weights"})
        else:
            uid = client.store_instance(path.read_bytes())
            results.append({"file": name, "sop_instance_uid": uid, "kind": "instance"})
    _emit(args, {"imported": results}, f"imported {len(results)} files")
    return EXIT_OK


def cmd_ls(args) -> int:
    client = PacsClient(args.server)
    if args.level == "study":
        rows = client.studies()
    elif args.level == "series":
        rows = []
        for study in client.studies():
            rows.extend(client.series_of(study["StudyInstanceUID"]))
    else:
        rows = client.instances()
    _emit(args, {"level": args.level, "rows": rows},
          "\n".join(_summarize_row(args.level, r) for r in rows))
    return EXIT_OK


def _summarize_row(level: str, row: dict) -> str:
    if level == "study":
        return f"{row['StudyInstanceUID']}  series={row['SeriesCount']} instances={row['InstanceCount']}"
    if level == "series":
        return f"{row['SeriesInstanceUID']}  {row.get('Modality', '?')} n={row['InstanceCount']}"
    return f"{row.get('SOPInstanceUID', '?')}  {row.get('Modality', '')} {row.get('BodyPartExamined', '')}".rstrip()


def cmd_predict(args) -> int:
    client = PacsClient(args.server)
    result = client.predict(args.slice)
    text = json.dumps(result, indent=2)
    if args.out and args.out != "-":
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        if args.quiet:
            print(f"{len(result['proposals'])} proposals from {result['dnn_uid']}")
    elif args.quiet:
        print(f"{len(result['proposals'])} proposals from {result['dnn_uid']} "
              f"(session {result['session_id']})")
    else:
        print(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    client = PacsClient(args.server)
    decisions = dict(pair.split("=", 1) for pair in args.decision)
    uid = client.submit_validation(args.session, decisions, args.reviewer)
    _emit(args, {"sop_instance_uid": uid}, uid)
    return EXIT_OK


def cmd_inspect(args) -> int:
    dcm = read_file(args.file)
    body = dcm.body
    payload = {"sop_class_uid": body.text(tags.SOP_CLASS_UID)}
    try:
        desc = parse_iodeep(body)
        payload.update({
            "kind": "network",
            "dnn_uid": desc.dnn_uid,
            "dnn_name": desc.dnn_name,
            "modality": desc.modality,
            "body_part_examined": desc.body_part_examined,
            "samples_per_pixel": desc.samples_per_pixel,
        })
    except IodeepError:
        payload["kind"] = "other"
        payload["elements"] = len(body)
    _emit(args, payload, f"{payload.get('kind')} {payload.get('dnn_uid', '')}".strip())
    return EXIT_OK


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iodeep",
        description="Pack networks into DICOM instances, serve a mini PACS, "
                    "and run the ROI proposal workflow.")
    parser.add_argument("--quiet", action="store_true",
                        help="terse human output instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pack", help="build a network-carrying DICOM instance")
    p.add_argument("--arch", required=True, help="architecture document (JSON)")
    p.add_argument("--weights", required=True, help="weights container (.iodw)")
    p.add_argument("--name", required=True, help="human-readable network name")
    p.add_argument("--modality", required=True)
    p.add_argument("--body-part", required=True, dest="body_part")
    p.add_argument("--samples", type=int, default=1, choices=(1, 3))
    p.add_argument("--photometric", default="MONOCHROME2",
                   choices=("MONOCHROME1", "MONOCHROME2", "RGB"))
    p.add_argument("--out", required=True, help="output .dcm path")
    p.set_defaults(fn=cmd_pack)

    p = sub.add_parser("serve", help="run the mini PACS server")
    p.add_argument("--store", default=os.environ.get("IODEEP_STORE", "./iodeep-store"))
    p.add_argument("--bind", default=os.environ.get("IODEEP_BIND", DEFAULT_BIND))
    p.add_argument("--threshold", type=float, default=0.5,
                   help="mask probability cut for ROI extraction")
    p.add_argument("--min-area", type=int, default=16, dest="min_area",
                   help="smallest ROI component kept, in mask pixels")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("import", help="upload .dcm instances / .iodw weights")
    p.add_argument("--server", required=True)
    p.add_argument("files", nargs="+")
    p.set_defaults(fn=cmd_import)

    p = sub.add_parser("ls", help="list store content")
    p.add_argument("--server", required=True)
    p.add_argument("--level", default="study", choices=("study", "series", "instance"))
    p.set_defaults(fn=cmd_ls)

    p = sub.add_parser("predict", help="run ROI prediction for one slice")
    p.add_argument("--server", required=True)
    p.add_argument("--slice", required=True, help="SOPInstanceUID of the slice")
    p.add_argument("--out", help="write proposals JSON here ('-' = stdout)")
    p.set_defaults(fn=cmd_predict)

    p = sub.add_parser("validate", help="submit accept/reject decisions")
    p.add_argument("--server", required=True)
    p.add_argument("--session", required=True)
    p.add_argument("--reviewer", required=True)
    p.add_argument("--decision", action="append", default=[],
                   metavar="PROPOSAL=accepted|rejected")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("inspect", help="describe a .dcm file")
    p.add_argument("file")
    p.set_defaults(fn=cmd_inspect)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NoMatchingNetwork as exc:
        print(f"warning: {exc}", file=sys.stderr)
        return EXIT_NO_MATCHING_NETWORK
    except (IodeepError, ApiError, OSError, ValueError) as exc:
        return _fail(str(exc))
    except KeyboardInterrupt:
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
