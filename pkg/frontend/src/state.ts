/** Viewer state and its pure transitions; the DOM layer just renders it. */

import type { PredictionResult, Proposal } from "./api";

export type RoiStatus = "proposed" | "accepted" | "rejected";

export interface RoiView extends Proposal {
  status: RoiStatus;
}

export interface Banner {
  kind: "error" | "warning" | "success" | "info";
  text: string;
}

export interface ViewerState {
  studyUid?: string;
  seriesUid?: string;
  sliceUids: string[];
  sliceIndex: number;
  window: { center?: number; width?: number };
  playing: boolean;
  sessionId?: string;
  dnnUid?: string;
  proposals: RoiView[];
  storedUid?: string;
  busy: boolean;
  banner?: Banner;
}

export function initialState(): ViewerState {
  return {
    sliceUids: [],
    sliceIndex: -1,
    window: {},
    playing: false,
    proposals: [],
    busy: false,
  };
}

export function currentSliceUid(state: ViewerState): string | undefined {
  return state.sliceIndex >= 0 ? state.sliceUids[state.sliceIndex] : undefined;
}

/** "AI ROI" is available only while an image is on screen and we're idle. */
export function aiRoiEnabled(state: ViewerState): boolean {
  return currentSliceUid(state) !== undefined && !state.busy;
}

/** Submit only once every proposal has a decision, and only once. */
export function submitEnabled(state: ViewerState): boolean {
  return (
    state.proposals.length > 0 &&
    state.proposals.every((p) => p.status !== "proposed") &&
    state.storedUid === undefined &&
    !state.busy
  );
}

export function selectSeries(
  state: ViewerState,
  studyUid: string,
  seriesUid: string,
  sliceUids: string[],
): ViewerState {
  return {
    ...state,
    studyUid,
    seriesUid,
    sliceUids,
    sliceIndex: sliceUids.length ? 0 : -1,
    playing: false,
    ...clearSession(),
  };
}

export function gotoSlice(state: ViewerState, index: number): ViewerState {
  if (!state.sliceUids.length) return state;
  const n = state.sliceUids.length;
  const wrapped = ((index % n) + n) % n;
  if (wrapped === state.sliceIndex) return state;
  // moving to another slice abandons the un-submitted session
  return { ...state, sliceIndex: wrapped, ...clearSession() };
}

export function stepSlice(state: ViewerState, delta: number): ViewerState {
  return gotoSlice(state, state.sliceIndex + delta);
}

function clearSession() {
  return {
    sessionId: undefined,
    dnnUid: undefined,
    proposals: [] as RoiView[],
    storedUid: undefined,
    banner: undefined,
  };
}

export function proposalsReceived(state: ViewerState, result: PredictionResult): ViewerState {
  const proposals = result.proposals.map((p) => ({ ...p, status: "proposed" as RoiStatus }));
  return {
    ...state,
    busy: false,
    sessionId: result.session_id,
    dnnUid: result.dnn_uid,
    proposals,
    storedUid: undefined,
    banner: proposals.length
      ? undefined
      : { kind: "info", text: "no ROI proposed for this slice" },
  };
}

/** Click cycles proposed -> accepted -> rejected -> accepted -> ... */
export function toggleProposal(state: ViewerState, id: string): ViewerState {
  if (state.storedUid !== undefined) return state; // decisions are final after submit
  const proposals = state.proposals.map((p): RoiView => {
    if (p.id !== id) return p;
    const next: RoiStatus = p.status === "accepted" ? "rejected" : "accepted";
    return { ...p, status: next };
  });
  return { ...state, proposals };
}

export function submitted(state: ViewerState, storedUid: string): ViewerState {
  return {
    ...state,
    busy: false,
    storedUid,
    banner: { kind: "success", text: `stored RT Structure Set ${storedUid}` },
  };
}

export function failed(state: ViewerState, banner: Banner): ViewerState {
  // the failure is surfaced, everything else is preserved
  return { ...state, busy: false, banner };
}

export function decisions(state: ViewerState): Record<string, "accepted" | "rejected"> {
  const out: Record<string, "accepted" | "rejected"> = {};
  for (const p of state.proposals) {
    if (p.status === "accepted" || p.status === "rejected") out[p.id] = p.status;
  }
  return out;
}
