/** Typed client for the /v1 PACS API. The viewer's only backend contact. */

export interface StudySummary {
  StudyInstanceUID: string;
  SeriesCount: number;
  InstanceCount: number;
  PatientID?: string;
  StudyDescription?: string;
}

export interface SeriesSummary {
  StudyInstanceUID: string;
  SeriesInstanceUID: string;
  Modality: string;
  InstanceCount: number;
}

export interface InstanceSummary {
  SOPInstanceUID: string;
  Modality?: string;
  [key: string]: string | undefined;
}

export interface SliceMetadata {
  PatientName: string;
  PatientID: string;
  PatientBirthDate: string;
  PatientSex: string;
  AccessionNumber: string;
  InstitutionName: string;
  ReferringPhysicianName: string;
  StudyDate: string;
  StudyDescription: string;
  StudyID: string;
  StudyInstanceUID: string;
  StudyTime: string;
  Rows: number;
  Columns: number;
  [key: string]: string | number;
}

export interface Proposal {
  id: string;
  slice_ref_uid: string;
  points: [number, number][];
  label: string;
  confidence: number;
  status: string;
}

export interface PredictionResult {
  session_id: string;
  slice_uid: string;
  dnn_uid: string;
  proposals: Proposal[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }

  get blocksPipeline(): boolean {
    return this.code === "NoMatchingNetwork";
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let code = "Http";
    let message = response.statusText;
    try {
      const payload = await response.json();
      code = payload.error ?? code;
      message = payload.message ?? message;
    } catch {
      /* non-JSON error body: keep the status text */
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  studies(): Promise<StudySummary[]> {
    return fetch(`${this.base}/v1/studies`).then((r) => asJson(r));
  }

  series(studyUid: string): Promise<SeriesSummary[]> {
    return fetch(`${this.base}/v1/studies/${studyUid}/series`).then((r) => asJson(r));
  }

  instances(seriesUid: string): Promise<InstanceSummary[]> {
    return fetch(`${this.base}/v1/series/${seriesUid}/instances`).then((r) => asJson(r));
  }

  metadata(sliceUid: string): Promise<SliceMetadata> {
    return fetch(`${this.base}/v1/instances/${sliceUid}/metadata`).then((r) => asJson(r));
  }

  /** Server-side windowed PNG; window settings round-trip as query params. */
  pixelsUrl(sliceUid: string, center?: number, width?: number): string {
    const params = new URLSearchParams();
    if (center !== undefined && width !== undefined) {
      params.set("center", String(center));
      params.set("width", String(width));
    }
    const query = params.toString();
    return `${this.base}/v1/instances/${sliceUid}/pixels.png${query ? `?${query}` : ""}`;
  }

  predict(sliceUid: string): Promise<PredictionResult> {
    return fetch(`${this.base}/v1/predict/${sliceUid}`, { method: "POST" }).then((r) =>
      asJson(r),
    );
  }

  submitValidation(
    sessionId: string,
    decisions: Record<string, "accepted" | "rejected">,
    reviewer: string,
  ): Promise<{ sop_instance_uid: string }> {
    return fetch(`${this.base}/v1/rtstruct`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ session_id: sessionId, decisions, reviewer }),
    }).then((r) => asJson(r));
  }
}
