"""Thin urllib client for the /v1 API, shared by the CLI and tests."""

from __future__ import annotations

import json
from urllib import error, parse, request

from ..errors import NoMatchingNetwork, NotFound, StoreFailure


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        super().__init__(f"{code} ({status}): {message}")


def _raise_for(payload: dict, status: int):
    code = payload.get("error", "Unknown")
    message = payload.get("message", "")
    if code == "NoMatchingNetwork":
        raise NoMatchingNetwork(message)
    if code == "NotFound":
        raise NotFound(message)
    if code == "StoreFailure":
        raise StoreFailure(message)
    raise ApiError(status, code, message)


class PacsClient:
    def __init__(self, base_url: str, timeout: float = 30.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def _request(self, method: str, path: str, data: bytes | None = None,
                 content_type: str | None = None, query: dict | None = None):
        url = f"{self.base_url}{path}"
        if query:
            url += "?" + parse.urlencode(query)
        req = request.Request(url, data=data, method=method)
        if content_type:
            req.add_header("Content-Type", content_type)
        try:
            with request.urlopen(req, timeout=self.timeout) as resp:
                body = resp.read()
                ctype = resp.headers.get("Content-Type", "")
        except error.HTTPError as exc:
            raw = exc.read()
            try:
                payload = json.loads(raw)
            except json.JSONDecodeError:
                raise ApiError(exc.code, "Http", raw.decode(errors="replace")) from exc
            _raise_for(payload, exc.code)
        if ctype.startswith("application/json"):
            return json.loads(body)
        return body

    # --- store/query/retrieve -------------------------------------------

    def store_instance(self, data: bytes) -> str:
        out = self._request("POST", "/v1/instances", data, "application/dicom")
        return out["sop_instance_uid"]

    def store_weights(self, dnn_uid: str, data: bytes) -> str:
        out = self._request("POST", f"/v1/weights/{dnn_uid}", data,
                            "application/octet-stream")
        return out["dnn_uid"]

    def retrieve_instance(self, uid: str) -> bytes:
        return self._request("GET", f"/v1/instances/{uid}")

    def retrieve_weights(self, dnn_uid: str) -> bytes:
        return self._request("GET", f"/v1/weights/{dnn_uid}")

    def studies(self, **filters):
        return self._request("GET", "/v1/studies", query=filters or None)

    def series_of(self, study_uid: str):
        return self._request("GET", f"/v1/studies/{study_uid}/series")

    def instances_of(self, series_uid: str):
        return self._request("GET", f"/v1/series/{series_uid}/instances")

    def instances(self, **filters):
        return self._request("GET", "/v1/instances", query=filters or None)

    def metadata(self, uid: str):
        return self._request("GET", f"/v1/instances/{uid}/metadata")

    # --- workflow -----------------------------------------------------------

    def predict(self, slice_uid: str) -> dict:
        return self._request("POST", f"/v1/predict/{slice_uid}")

    def submit_validation(self, session_id: str, decisions: dict[str, str],
                          reviewer: str) -> str:
        out = self._request(
            "POST", "/v1/rtstruct",
            json.dumps({"session_id": session_id, "decisions": decisions,
                        "reviewer": reviewer}).encode(),
            "application/json")
        return out["sop_instance_uid"]
