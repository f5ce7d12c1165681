"""HTTP face of the mini PACS.

All paths live under /v1. Store is POST of instance bytes, query is GET
with tag filters, retrieve is GET by UID; prediction and validation are
POSTs the viewer and CLI share. JSON in, JSON out, except instance bytes
(application/dicom), weights (application/octet-stream) and rendered
slice pixels (image/png).
"""

from __future__ import annotations

import json
import logging
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

import numpy as np

from ..dicom import tags
from ..errors import (
    EmptyRoiSet,
    IodeepError,
    NoMatchingNetwork,
    NotDicom,
    NotFound,
    PipelineError,
    StoreFailure,
    UnindexedTagFilter,
)
from ..engine.preprocess import decode_pixel_array
from ..images import pixel_meta_of
from ..workflow import RoiWorkflow
from .png import encode_png, window_to_uint8
from .store import FileStore

log = logging.getLogger("iodeep.pacs")

VIEWER_METADATA_TAGS = {
    "PatientName": tags.PATIENT_NAME,
    "PatientID": tags.PATIENT_ID,
    "PatientBirthDate": tags.PATIENT_BIRTH_DATE,
    "PatientSex": tags.PATIENT_SEX,
    "AccessionNumber": tags.ACCESSION_NUMBER,
    "InstitutionName": tags.INSTITUTION_NAME,
    "ReferringPhysicianName": tags.REFERRING_PHYSICIAN_NAME,
    "StudyDate": tags.STUDY_DATE,
    "StudyDescription": tags.STUDY_DESCRIPTION,
    "StudyID": tags.STUDY_ID,
    "StudyInstanceUID": tags.STUDY_INSTANCE_UID,
    "StudyTime": tags.STUDY_TIME,
    "SeriesInstanceUID": tags.SERIES_INSTANCE_UID,
    "SOPClassUID": tags.SOP_CLASS_UID,
    "SOPInstanceUID": tags.SOP_INSTANCE_UID,
    "Modality": tags.MODALITY,
    "BodyPartExamined": tags.BODY_PART_EXAMINED,
    "FrameOfReferenceUID": tags.FRAME_OF_REFERENCE_UID,
    "Rows": tags.ROWS,
    "Columns": tags.COLUMNS,
}

_STATUS_BY_ERROR = (
    (NoMatchingNetwork, 409),
    (EmptyRoiSet, 409),
    (NotFound, 404),
    (UnindexedTagFilter, 400),
    (NotDicom, 400),
    (StoreFailure, 409),
    (PipelineError, 500),
)


def _error_payload(exc: Exception) -> tuple[int, dict]:
    for klass, status in _STATUS_BY_ERROR:
        if isinstance(exc, klass):
            return status, {"error": klass.__name__, "message": str(exc)}
    if isinstance(exc, ValueError):
        return 400, {"error": "BadRequest", "message": str(exc)}
    if isinstance(exc, IodeepError):
        return 400, {"error": type(exc).__name__, "message": str(exc)}
    return 500, {"error": "Internal", "message": str(exc)}


class PacsService:
    """Routing facade shared by the HTTP handler and in-process callers."""

    def __init__(self, store: FileStore, workflow: RoiWorkflow | None = None):
        self.store = store
        self.workflow = workflow or RoiWorkflow(store)

    # --- JSON endpoints ------------------------------------------------------

    def list_studies(self, filters):
        return self.store.query("study", filters)

    def list_series(self, study_uid):
        return self.store.query("series", {"StudyInstanceUID": study_uid})

    def list_instances_of_series(self, series_uid):
        return self.store.query("instance", {"SeriesInstanceUID": series_uid})

    def list_instances(self, filters):
        return self.store.query("instance", filters)

    def instance_metadata(self, uid):
        ds = self.store.load_dataset(uid)
        return {k: ds.text(t, "") if t not in (tags.ROWS, tags.COLUMNS)
                else ds.int(t, 0) for k, t in VIEWER_METADATA_TAGS.items()}

    def render_png(self, uid, center=None, width=None):
        ds = self.store.load_dataset(uid)
        meta = pixel_meta_of(ds)
        arr = decode_pixel_array(ds.raw(tags.PIXEL_DATA), meta)
        values = arr.astype(np.float64)
        if meta.photometric_interpretation == "MONOCHROME1":
            values = values.max() - values
        if center is None or width is None:
            lo, hi = float(values.min()), float(values.max())
            center = (lo + hi) / 2.0
            width = max(hi - lo, 1.0)
        img = window_to_uint8(values, center, width)
        if meta.samples_per_pixel == 3:
            return encode_png(np.moveaxis(img, 0, 2))
        return encode_png(img[0])

    def predict(self, slice_uid):
        return self.workflow.run_roi_prediction(slice_uid).to_json()

    def submit_rtstruct(self, payload):
        for key in ("session_id", "decisions", "reviewer"):
            if key not in payload:
                raise ValueError(f"missing {key!r} in validation payload")
        uid = self.workflow.submit_validation(
            payload["session_id"], dict(payload["decisions"]), payload["reviewer"])
        return {"sop_instance_uid": uid}


class _Handler(BaseHTTPRequestHandler):
    service: PacsService  # set by serve()/make_server()

    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # route through logging, not stderr
        log.debug("%s " + fmt, self.address_string(), *args)

    # --- plumbing ---------------------------------------------------------

    def _send(self, status: int, payload: bytes, content_type: str):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def _json(self, obj, status=200):
        self._send(status, json.dumps(obj).encode(), "application/json")

    def _fail(self, exc: Exception):
        status, payload = _error_payload(exc)
        if status >= 500:
            log.exception("request failed: %s", exc)
        self._json(payload, status)

    def _body(self) -> bytes:
        length = int(self.headers.get("Content-Length", 0))
        return self.rfile.read(length) if length else b""

    # --- routing ------------------------------------------------------------

    def do_GET(self):  # noqa: N802 - http.server naming
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            self._route_get(url.path, query)
        except Exception as exc:  # noqa: BLE001
            self._fail(exc)

    def _route_get(self, path, query):
        service = self.service
        if path == "/v1/studies":
            return self._json(service.list_studies(query))
        m = re.fullmatch(r"/v1/studies/([^/]+)/series", path)
        if m:
            return self._json(service.list_series(m.group(1)))
        m = re.fullmatch(r"/v1/series/([^/]+)/instances", path)
        if m:
            return self._json(service.list_instances_of_series(m.group(1)))
        if path == "/v1/instances":
            return self._json(service.list_instances(query))
        m = re.fullmatch(r"/v1/instances/([^/]+)/metadata", path)
        if m:
            return self._json(service.instance_metadata(m.group(1)))
        m = re.fullmatch(r"/v1/instances/([^/]+)/pixels\.png", path)
        if m:
            center = float(query["center"]) if "center" in query else None
            width = float(query["width"]) if "width" in query else None
            return self._send(200, service.render_png(m.group(1), center, width), "image/png")
        m = re.fullmatch(r"/v1/instances/([^/]+)", path)
        if m:
            return self._send(200, service.store.retrieve_instance(m.group(1)),
                              "application/dicom")
        m = re.fullmatch(r"/v1/weights/([^/]+)", path)
        if m:
            return self._send(200, service.store.retrieve_weights(m.group(1)),
                              "application/octet-stream")
        raise NotFound(f"no route {path}")

    def do_POST(self):  # noqa: N802
        url = urlparse(self.path)
        try:
            self._route_post(url.path)
        except Exception as exc:  # noqa: BLE001
            self._fail(exc)

    def _route_post(self, path):
        service = self.service
        if path == "/v1/instances":
            uid = service.store.store_instance(self._body())
            return self._json({"sop_instance_uid": uid}, 201)
        m = re.fullmatch(r"/v1/weights/([^/]+)", path)
        if m:
            uid = service.store.store_weights(m.group(1), self._body())
            return self._json({"dnn_uid": uid}, 201)
        m = re.fullmatch(r"/v1/predict/([^/]+)", path)
        if m:
            return self._json(service.predict(m.group(1)))
        if path == "/v1/rtstruct":
            payload = json.loads(self._body() or b"{}")
            return self._json(service.submit_rtstruct(payload), 201)
        raise NotFound(f"no route {path}")


def make_server(store_root, host: str = "127.0.0.1", port: int = 0,
                threshold: float | None = None,
                min_area: int | None = None) -> ThreadingHTTPServer:
    """A ready-to-run server bound to host:port (port 0 picks a free one)."""
    store = FileStore(store_root)
    workflow_kwargs = {}
    if threshold is not None:
        workflow_kwargs["threshold"] = threshold
    if min_area is not None:
        workflow_kwargs["min_area"] = min_area
    service = PacsService(store, RoiWorkflow(store, **workflow_kwargs))
    handler = type("BoundHandler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host, port), handler)
    server.service = service  # type: ignore[attr-defined]
    return server


def serve(store_root, host: str, port: int,
          threshold: float | None = None, min_area: int | None = None) -> None:
    server = make_server(store_root, host, port, threshold, min_area)
    log.info("serving store %s on %s:%d", store_root, *server.server_address[:2])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


class BackgroundServer:
    """Context manager running the service on a daemon thread (tests, CLI)."""

    def __init__(self, store_root, host: str = "127.0.0.1", port: int = 0):
        self.server = make_server(store_root, host, port)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()
        self.thread.join(timeout=5)
