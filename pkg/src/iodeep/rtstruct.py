"""Masks to polylines, and polylines to an RT Structure Set.

Contours trace the outer boundary of each 4-connected thresholded
component along the pixel-edge lattice ("crack" following): vertices are
pixel-corner coordinates, so a single pixel at (row r, col c) yields the
unit square (c,r) (c+1,r) (c+1,r+1) (c,r+1). Walk direction keeps the
component on the right (with y growing downward), which makes the shoelace
sum of every emitted polyline positive.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .dicom import DataSet, tags, uids
from .engine import kernels
from .errors import EmptyRoiSet, FrameMismatch

# (dx, dy) with y pointing down
_E, _S, _W, _N = (1, 0), (0, 1), (-1, 0), (0, -1)
_RIGHT_OF = {_E: _S, _S: _W, _W: _N, _N: _E}
_LEFT_OF = {v: k for k, v in _RIGHT_OF.items()}


@dataclass(frozen=True)
class RoiPolyline:
    """A closed contour in native image pixel units (x = column, y = row)."""

    slice_ref_uid: str
    points: tuple[tuple[float, float], ...]
    label: str = ""

    def __post_init__(self):
        if len(self.points) < 3:
            raise ValueError("a closed polyline needs at least 3 points")
        for a, b in zip(self.points, self.points[1:]):
            if a == b:
                raise ValueError("consecutive identical points")

    def signed_area(self) -> float:
        pts = self.points
        acc = 0.0
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
            acc += x0 * y1 - x1 * y0
        return acc / 2.0


@dataclass(frozen=True)
class ValidationRecord:
    reviewer_name: str
    review_date: str = field(default_factory=lambda: _dt.date.today().strftime("%Y%m%d"))
    review_time: str = field(default_factory=lambda: _dt.datetime.now().strftime("%H%M%S"))
    approval_status: str = "APPROVED"


@dataclass(frozen=True)
class ComponentContour:
    """Extraction result for one component, before UID binding."""

    points: tuple[tuple[float, float], ...]
    area_px: int
    mean_probability: float


def _boundary_edges(component: np.ndarray):
    """Directed crack edges keeping the component on the right (y down)."""
    rows, cols = np.nonzero(component)
    h, w = component.shape

    def inside(r, c):
        return 0 <= r < h and 0 <= c < w and component[r, c]

    edges: dict[tuple[int, int], dict[tuple[int, int], bool]] = {}

    def add(x, y, d):
        edges.setdefault((x, y), {})[d] = False

    for r, c in zip(rows.tolist(), cols.tolist()):
        if not inside(r - 1, c):
            add(c, r, _E)        # top edge
        if not inside(r, c + 1):
            add(c + 1, r, _S)    # right edge
        if not inside(r + 1, c):
            add(c + 1, r + 1, _W)  # bottom edge
        if not inside(r, c - 1):
            add(c, r + 1, _N)    # left edge
    return edges


def _trace_outer_contour(component: np.ndarray) -> list[tuple[int, int]]:
    """Outer boundary polygon of a 4-connected component, CCW by shoelace."""
    edges = _boundary_edges(component)
    rows, cols = np.nonzero(component)
    first = int(np.argmin(rows * component.shape[1] + cols))
    start = (int(cols[first]), int(rows[first]))  # corner of topmost-leftmost pixel

    points: list[tuple[int, int]] = []
    pos = start
    direction = _E
    edges[pos][_E] = True
    points.append(pos)
    prev_dir = _E
    pos = (pos[0] + 1, pos[1])
    while pos != start:
        # right turn first, then straight, then left: hand on the inside wall
        for cand in (_RIGHT_OF[prev_dir], prev_dir, _LEFT_OF[prev_dir]):
            slot = edges.get(pos)
            if slot is not None and cand in slot and not slot[cand]:
                direction = cand
                break
        else:
            raise AssertionError("boundary tracing lost the wall")  # pragma: no cover
        edges[pos][direction] = True
        if direction != prev_dir:
            points.append(pos)
        pos = (pos[0] + direction[0], pos[1] + direction[1])
        prev_dir = direction
    return points


def extract_components(
    mask: np.ndarray,
    threshold: float = 0.5,
    min_area: int = 16,
) -> list[ComponentContour]:
    """One contour per thresholded connected component of a 2-D mask."""
    mask = np.asarray(mask)
    if mask.ndim == 3 and mask.shape[0] == 1:
        mask = mask[0]
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2-D (or a 1-channel tensor), got {mask.shape}")
    if not (0.0 < threshold < 1.0):
        raise ValueError("threshold must lie strictly between 0 and 1")
    fg = mask >= threshold
    labels, count = kernels.label_components(fg)
    out: list[ComponentContour] = []
    for k in range(1, count + 1):
        component = labels == k
        area = int(component.sum())
        if area < min_area:
            continue
        pts = _trace_outer_contour(component)
        out.append(ComponentContour(
            points=tuple((float(x), float(y)) for x, y in pts),
            area_px=area,
            mean_probability=float(mask[component].mean()),
        ))
    return out


def mask_to_polylines(
    mask: np.ndarray,
    threshold: float = 0.5,
    min_area: int = 16,
    *,
    slice_ref_uid: str = "",
    native_shape: tuple[int, int] | None = None,
    label_prefix: str = "AI ROI",
) -> list[RoiPolyline]:
    """Polylines for every large-enough component, in native pixel units.

    ``native_shape`` is (rows, cols) of the source slice; mask coordinates
    are scaled up when the mask was predicted at model resolution.
    """
    mask = np.asarray(mask)
    if mask.ndim == 3 and mask.shape[0] == 1:
        mask = mask[0]
    sy = sx = 1.0
    if native_shape is not None:
        sy = native_shape[0] / mask.shape[0]
        sx = native_shape[1] / mask.shape[1]
    rois = []
    for i, comp in enumerate(extract_components(mask, threshold, min_area), start=1):
        rois.append(RoiPolyline(
            slice_ref_uid=slice_ref_uid,
            points=tuple((x * sx, y * sy) for x, y in comp.points),
            label=f"{label_prefix} {i}",
        ))
    return rois


def rasterize_polyline(points, shape: tuple[int, int]) -> np.ndarray:
    """Pixels whose centers fall inside the closed polygon (even-odd rule).

    The inverse of contour extraction up to boundary effects; used by the
    fidelity checks and the confidence computation.
    """
    h, w = shape
    out = np.zeros((h, w), dtype=bool)
    xs = np.asarray([p[0] for p in points], dtype=np.float64)
    ys = np.asarray([p[1] for p in points], dtype=np.float64)
    cx = np.arange(w, dtype=np.float64) + 0.5
    for r in range(h):
        py = r + 0.5
        inside = np.zeros(w, dtype=bool)
        j = len(xs) - 1
        for i in range(len(xs)):
            yi, yj = ys[i], ys[j]
            if (yi > py) != (yj > py):
                xcross = xs[i] + (py - yi) / (yj - yi) * (xs[j] - xs[i])
                inside ^= cx < xcross
            j = i
        out[r] = inside
    return out


# --- DICOM persistence ------------------------------------------------------


def build_rtstruct(
    rois: list[RoiPolyline],
    source: DataSet,
    validation: ValidationRecord,
) -> DataSet:
    """Persist accepted ROIs as an RT Structure Set referencing the slice."""
    if not rois:
        raise EmptyRoiSet("no accepted ROI to store")
    frame_uid = source.text(tags.FRAME_OF_REFERENCE_UID, "")
    for roi in rois:
        if roi.slice_ref_uid != frame_uid:
            raise FrameMismatch(
                f"ROI references frame {roi.slice_ref_uid!r}, slice has {frame_uid!r}")

    ds = DataSet()
    ds.put(tags.SOP_CLASS_UID, "UI", uids.RT_STRUCTURE_SET_STORAGE)
    ds.put(tags.SOP_INSTANCE_UID, "UI", uids.generate_uid())
    ds.put(tags.MODALITY, "CS", "RTSTRUCT")
    # patient identity travels with the ROIs
    for tag, vr in ((tags.PATIENT_NAME, "PN"), (tags.PATIENT_ID, "LO"),
                    (tags.PATIENT_BIRTH_DATE, "DA"), (tags.PATIENT_SEX, "CS")):
        el = source.get(tag)
        ds.put(tag, vr, el.value if el is not None else ())
    ds.put(tags.STUDY_INSTANCE_UID, "UI", source.text(tags.STUDY_INSTANCE_UID, ""))
    ds.put(tags.SERIES_INSTANCE_UID, "UI", uids.generate_uid())
    ds.put(tags.FRAME_OF_REFERENCE_UID, "UI", frame_uid)
    ds.put(tags.STRUCTURE_SET_LABEL, "SH", "AI ROI")

    roi_items = []
    contour_items = []
    for number, roi in enumerate(rois, start=1):
        item = DataSet()
        item.put(tags.ROI_NUMBER, "IS", number)
        item.put(tags.REFERENCED_FRAME_OF_REFERENCE_UID, "UI", frame_uid)
        item.put(tags.ROI_NAME, "LO", roi.label or f"ROI {number}")
        roi_items.append(item)

        contour = DataSet()
        triplets: list[float] = []
        for x, y in roi.points:
            triplets.extend((x, y, 0.0))
        contour.put(tags.CONTOUR_GEOMETRIC_TYPE, "CS", "CLOSED_PLANAR")
        contour.put(tags.NUMBER_OF_CONTOUR_POINTS, "IS", len(roi.points))
        contour.put(tags.CONTOUR_DATA, "DS", triplets)
        wrapper = DataSet()
        wrapper.put(tags.CONTOUR_SEQUENCE, "SQ", [contour])
        wrapper.put(tags.REFERENCED_ROI_NUMBER, "IS", number)
        contour_items.append(wrapper)

    ds.put(tags.STRUCTURE_SET_ROI_SEQUENCE, "SQ", roi_items)
    ds.put(tags.ROI_CONTOUR_SEQUENCE, "SQ", contour_items)
    ds.put(tags.APPROVAL_STATUS, "CS", validation.approval_status)
    ds.put(tags.REVIEW_DATE, "DA", validation.review_date)
    ds.put(tags.REVIEW_TIME, "TM", validation.review_time)
    ds.put(tags.REVIEWER_NAME, "PN", validation.reviewer_name)
    return ds


def extract_polylines(ds: DataSet) -> list[RoiPolyline]:
    """Read the contours back out of a stored RT Structure Set."""
    frame_uid = ds.text(tags.FRAME_OF_REFERENCE_UID, "")
    names = {}
    for item in ds.sequence(tags.STRUCTURE_SET_ROI_SEQUENCE):
        names[item.int(tags.ROI_NUMBER)] = item.text(tags.ROI_NAME, "")
    out = []
    for wrapper in ds.sequence(tags.ROI_CONTOUR_SEQUENCE):
        number = wrapper.int(tags.REFERENCED_ROI_NUMBER)
        for contour in wrapper.sequence(tags.CONTOUR_SEQUENCE):
            data = contour.floats(tags.CONTOUR_DATA)
            pts = tuple((data[i], data[i + 1]) for i in range(0, len(data), 3))
            out.append(RoiPolyline(
                slice_ref_uid=frame_uid,
                points=pts,
                label=names.get(number, ""),
            ))
    return out
