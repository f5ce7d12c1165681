"""Persistent instance store with a rebuildable in-memory index.

Files live under ``<root>/instances/<SOPInstanceUID>.dcm`` and weights
blobs under ``<root>/weights/<DnnUID>.iodw``; everything queryable is
re-derivable from the files, so deleting the index state and rebuilding
yields identical query results.
"""

from __future__ import annotations

import dataclasses
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from ..dicom import DataSet, DicomFile, tags
from ..engine.weights import parse_weights
from ..errors import NotDicom, NotFound, UnindexedTagFilter

INDEXED_TAGS = {
    "SOPInstanceUID": tags.SOP_INSTANCE_UID,
    "SOPClassUID": tags.SOP_CLASS_UID,
    "StudyInstanceUID": tags.STUDY_INSTANCE_UID,
    "SeriesInstanceUID": tags.SERIES_INSTANCE_UID,
    "Modality": tags.MODALITY,
    "BodyPartExamined": tags.BODY_PART_EXAMINED,
    "StudyDescription": tags.STUDY_DESCRIPTION,
    "SamplesPerPixel": tags.SAMPLES_PER_PIXEL,
    "PatientID": tags.PATIENT_ID,
    "DnnUID": tags.DNN_UID,
}

QUERY_LEVELS = ("study", "series", "instance")


@dataclass(frozen=True)
class InstanceRecord:
    sop_instance_uid: str
    sop_class_uid: str
    study_uid: str
    series_uid: str
    path: str
    indexed: dict = field(default_factory=dict)


def _record_for(body: DataSet, path: str) -> InstanceRecord:
    indexed = {}
    for keyword, tag in INDEXED_TAGS.items():
        el = body.get(tag)
        if el is None or el.is_empty:
            continue
        value = el.first()
        indexed[keyword] = str(value)
    uid = body.text(tags.SOP_INSTANCE_UID, "")
    if not uid:
        raise NotDicom("instance carries no SOPInstanceUID")
    return InstanceRecord(
        sop_instance_uid=uid,
        sop_class_uid=body.text(tags.SOP_CLASS_UID, ""),
        study_uid=body.text(tags.STUDY_INSTANCE_UID, ""),
        series_uid=body.text(tags.SERIES_INSTANCE_UID, ""),
        path=path,
        indexed=indexed,
    )


class FileStore:
    """Thread-safe store/query/retrieve over a directory tree."""

    def __init__(self, root):
        self.root = Path(root)
        self.instances_dir = self.root / "instances"
        self.weights_dir = self.root / "weights"
        self.instances_dir.mkdir(parents=True, exist_ok=True)
        self.weights_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._records: dict[str, InstanceRecord] = {}
        self._revision = 0
        self.rebuild_index()

    # --- store -----------------------------------------------------------

    def store_instance(self, data: bytes) -> str:
        dcm = DicomFile.from_bytes(bytes(data))
        record = _record_for(dcm.body, "")
        path = self.instances_dir / f"{record.sop_instance_uid}.dcm"
        tmp = path.with_suffix(f".tmp.{os.getpid()}.{threading.get_ident()}")
        tmp.write_bytes(data)
        os.replace(tmp, path)
        record = dataclasses.replace(record, path=str(path))
        with self._lock:
            self._records[record.sop_instance_uid] = record
            self._revision += 1
        return record.sop_instance_uid

    def store_weights(self, dnn_uid: str, data: bytes) -> str:
        parse_weights(bytes(data))  # container must be sound before landing
        path = self.weights_dir / f"{dnn_uid}.iodw"
        tmp = path.with_suffix(f".tmp.{os.getpid()}.{threading.get_ident()}")
        tmp.write_bytes(data)
        os.replace(tmp, path)
        return dnn_uid

    # --- retrieve ----------------------------------------------------------

    def retrieve_instance(self, uid: str) -> bytes:
        with self._lock:
            record = self._records.get(uid)
        if record is None:
            raise NotFound(f"no instance {uid}")
        return Path(record.path).read_bytes()

    def retrieve_weights(self, dnn_uid: str) -> bytes:
        path = self.weights_dir / f"{dnn_uid}.iodw"
        if not path.is_file():
            raise NotFound(f"no weights payload for {dnn_uid}")
        return path.read_bytes()

    def load_dataset(self, uid: str) -> DataSet:
        return DicomFile.from_bytes(self.retrieve_instance(uid)).body

    # --- query --------------------------------------------------------------

    @property
    def revision(self) -> int:
        with self._lock:
            return self._revision

    def records(self) -> list[InstanceRecord]:
        with self._lock:
            return sorted(self._records.values(), key=lambda r: r.sop_instance_uid)

    def _filtered(self, filters: dict) -> list[InstanceRecord]:
        for keyword in filters:
            if keyword not in INDEXED_TAGS:
                raise UnindexedTagFilter(f"cannot filter on {keyword!r}")
        out = []
        for record in self.records():
            ok = all(record.indexed.get(k) == str(v) for k, v in filters.items())
            if ok:
                out.append(record)
        return out

    def query(self, level: str, filters: dict | None = None) -> list[dict]:
        """Exact-match filtering; deterministic UID-ascending ordering."""
        if level not in QUERY_LEVELS:
            raise ValueError(f"level must be one of {QUERY_LEVELS}")
        hits = self._filtered(filters or {})
        if level == "instance":
            return [dict(r.indexed) for r in hits]
        if level == "series":
            groups: dict[tuple[str, str], list[InstanceRecord]] = {}
            for r in hits:
                groups.setdefault((r.study_uid, r.series_uid), []).append(r)
            return [
                {
                    "StudyInstanceUID": study,
                    "SeriesInstanceUID": series,
                    "Modality": members[0].indexed.get("Modality", ""),
                    "InstanceCount": len(members),
                }
                for (study, series), members in sorted(groups.items(), key=lambda kv: kv[0][1])
            ]
        groups_by_study: dict[str, list[InstanceRecord]] = {}
        for r in hits:
            groups_by_study.setdefault(r.study_uid, []).append(r)
        out = []
        for study, members in sorted(groups_by_study.items()):
            entry = {
                "StudyInstanceUID": study,
                "SeriesCount": len({m.series_uid for m in members}),
                "InstanceCount": len(members),
            }
            for m in members:
                if "PatientID" in m.indexed:
                    entry["PatientID"] = m.indexed["PatientID"]
                    break
            for m in members:
                if "StudyDescription" in m.indexed:
                    entry["StudyDescription"] = m.indexed["StudyDescription"]
                    break
            out.append(entry)
        return out

    # --- maintenance ----------------------------------------------------------

    def rebuild_index(self) -> int:
        """Re-derive every record from the files on disk."""
        fresh: dict[str, InstanceRecord] = {}
        for path in sorted(self.instances_dir.glob("*.dcm")):
            body = DicomFile.from_bytes(path.read_bytes()).body
            record = _record_for(body, str(path))
            fresh[record.sop_instance_uid] = record
        with self._lock:
            self._records = fresh
        return len(fresh)

    def index_snapshot(self) -> list[InstanceRecord]:
        return self.records()
