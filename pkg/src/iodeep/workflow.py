"""The ROI prediction scenario, end to end.

One entry point takes only a slice UID — which network runs is decided by
tag matching, never by the caller. Stages run in a fixed order and any
failure surfaces as that stage's error; nothing is stored until the
physician submits validation decisions.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, replace

from .dicom import DicomFile, tags, uids
from .engine import create_model, load_weights, predict, preprocess
from .engine.weights import parse_weights
from .errors import (
    EmptyRoiSet,
    IodeepError,
    NoMatchingNetwork,
    PipelineError,
    StoreFailure,
)
from .images import pixel_meta_of
from .iod import parse_iodeep, slice_tags_of
from .netdesc import check_tensor_shape, parse_architecture
from .pacs.store import FileStore
from .rtstruct import (
    RoiPolyline,
    ValidationRecord,
    build_rtstruct,
    mask_to_polylines,
    rasterize_polyline,
)
from .selection import select_network

log = logging.getLogger("iodeep.workflow")

DEFAULT_THRESHOLD = 0.5
DEFAULT_MIN_AREA = 16


@dataclass(frozen=True)
class RoiProposal:
    proposal_id: str
    slice_ref_uid: str
    points: tuple[tuple[float, float], ...]
    label: str
    confidence: float
    status: str = "proposed"  # proposed | accepted | rejected

    def to_json(self) -> dict:
        return {
            "id": self.proposal_id,
            "slice_ref_uid": self.slice_ref_uid,
            "points": [[x, y] for x, y in self.points],
            "label": self.label,
            "confidence": self.confidence,
            "status": self.status,
        }


@dataclass
class PredictionSession:
    session_id: str
    slice_uid: str
    dnn_uid: str
    proposals: list[RoiProposal]
    stored_uid: str | None = None  # set once validation lands

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "slice_uid": self.slice_uid,
            "dnn_uid": self.dnn_uid,
            "proposals": [p.to_json() for p in self.proposals],
        }


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except NoMatchingNetwork:
        raise
    except IodeepError as exc:
        raise PipelineError(name, exc)
    except Exception as exc:  # noqa: BLE001 - labeled and re-raised
        raise PipelineError(name, exc)


class RoiWorkflow:
    """Pipeline + validation sessions over one instance store."""

    def __init__(self, store: FileStore, threshold: float = DEFAULT_THRESHOLD,
                 min_area: int = DEFAULT_MIN_AREA):
        self.store = store
        self.threshold = threshold
        self.min_area = min_area
        self._sessions: dict[str, PredictionSession] = {}
        self._lock = threading.Lock()

    # --- prediction ---------------------------------------------------------

    def _resolve_weights(self, descriptor):
        locator = descriptor.dnn_weights
        if locator.startswith("iodeep:weights/"):
            blob = self.store.retrieve_weights(locator.rsplit("/", 1)[1])
            return parse_weights(blob)
        return load_weights(locator)

    def run_roi_prediction(self, slice_uid: str) -> PredictionSession:
        slice_ds = _stage("load_slice", self.store.load_dataset, slice_uid)
        slice_tags = _stage("read_tags", slice_tags_of, slice_ds)

        candidates = []
        for summary in _stage("query_networks", self.store.query,
                              "instance", {"SOPClassUID": uids.IODEEP_SOP_CLASS}):
            ds = _stage("query_networks", self.store.load_dataset, summary["SOPInstanceUID"])
            candidates.append(_stage("query_networks", parse_iodeep, ds))

        result = select_network(slice_tags, candidates)
        if not result.matched:
            raise NoMatchingNetwork(
                f"none of {result.examined} stored networks matches the slice; "
                "the work pipeline is blocked")
        descriptor = next(c for c in candidates if c.dnn_uid == result.matched_uid)
        log.info("slice %s matched network %s (%s)",
                 slice_uid, descriptor.dnn_uid, descriptor.dnn_name)

        net = _stage("parse_architecture", parse_architecture, descriptor.dnn_architecture)
        meta = _stage("check_tensor_shape", pixel_meta_of, slice_ds)
        plan = _stage("check_tensor_shape", check_tensor_shape, meta, net.input_shape)
        weights = _stage("load_weights", self._resolve_weights, descriptor)
        model = _stage("create_model", create_model, net, weights)
        tensor = _stage("preprocess", preprocess, slice_ds.raw(tags.PIXEL_DATA), meta, plan)
        mask = _stage("predict", predict, model, tensor)

        frame_uid = slice_ds.text(tags.FRAME_OF_REFERENCE_UID, "")
        polylines = _stage(
            "extract_rois", mask_to_polylines, mask,
            self.threshold, self.min_area,
            slice_ref_uid=frame_uid, native_shape=(meta.rows, meta.columns))

        mask2d = mask[0] if mask.ndim == 3 else mask
        proposals = []
        for i, roi in enumerate(polylines, start=1):
            scale_y = mask2d.shape[0] / meta.rows
            scale_x = mask2d.shape[1] / meta.columns
            mask_pts = [(x * scale_x, y * scale_y) for x, y in roi.points]
            inside = rasterize_polyline(mask_pts, mask2d.shape)
            confidence = float(mask2d[inside].mean()) if inside.any() else 0.0
            proposals.append(RoiProposal(
                proposal_id=f"p{i}",
                slice_ref_uid=roi.slice_ref_uid,
                points=roi.points,
                label=roi.label,
                confidence=round(confidence, 6),
            ))

        session = PredictionSession(
            session_id=uuid.uuid4().hex,
            slice_uid=slice_uid,
            dnn_uid=descriptor.dnn_uid,
            proposals=proposals,
        )
        with self._lock:
            self._sessions[session.session_id] = session
        log.info("session %s: %d proposals for slice %s",
                 session.session_id, len(proposals), slice_uid)
        return session

    # --- validation ----------------------------------------------------------

    def get_session(self, session_id: str) -> PredictionSession:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise StoreFailure(f"unknown session {session_id!r}")
        return session

    def submit_validation(self, session_id: str, decisions: dict[str, str],
                          reviewer: str) -> str:
        """Store accepted ROIs as an RT Structure Set; returns its UID."""
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise StoreFailure(f"unknown session {session_id!r}")
            if session.stored_uid is not None:
                return session.stored_uid  # idempotent by session

            undecided = [p.proposal_id for p in session.proposals
                         if decisions.get(p.proposal_id) not in ("accepted", "rejected")]
            if undecided:
                raise ValueError(f"undecided proposals: {', '.join(undecided)}")

            decided = [replace(p, status=decisions[p.proposal_id])
                       for p in session.proposals]
            accepted = [p for p in decided if p.status == "accepted"]
            if not accepted:
                raise EmptyRoiSet("every proposal was rejected; nothing to store")

            rois = [RoiPolyline(p.slice_ref_uid, p.points, p.label) for p in accepted]
            slice_ds = self.store.load_dataset(session.slice_uid)
            rtstruct_ds = build_rtstruct(rois, slice_ds, ValidationRecord(reviewer))
            try:
                stored = self.store.store_instance(DicomFile(rtstruct_ds).to_bytes())
            except IodeepError as exc:
                raise StoreFailure(f"PACS rejected the RT Structure Set: {exc}") from exc
            session.proposals = decided
            session.stored_uid = stored
        log.info("session %s: stored RT Structure Set %s (%d accepted)",
                 session_id, stored, len(accepted))
        return stored
