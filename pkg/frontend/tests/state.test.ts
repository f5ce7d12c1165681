import { describe, expect, it } from "vitest";

import {
  aiRoiEnabled,
  decisions,
  gotoSlice,
  initialState,
  proposalsReceived,
  selectSeries,
  stepSlice,
  submitEnabled,
  submitted,
  toggleProposal,
} from "../src/state";
import type { PredictionResult } from "../src/api";

function twoProposals(): PredictionResult {
  return {
    session_id: "s1",
    slice_uid: "1.2.3",
    dnn_uid: "1.2.9",
    proposals: [
      { id: "p1", slice_ref_uid: "1.2.f", points: [[0, 0], [4, 0], [4, 4], [0, 4]], label: "AI ROI 1", confidence: 0.9, status: "proposed" },
      { id: "p2", slice_ref_uid: "1.2.f", points: [[8, 8], [12, 8], [12, 12], [8, 12]], label: "AI ROI 2", confidence: 0.8, status: "proposed" },
    ],
  };
}

describe("viewer state", () => {
  it("AI ROI is disabled until a slice is on screen", () => {
    let state = initialState();
    expect(aiRoiEnabled(state)).toBe(false);
    state = selectSeries(state, "st", "se", ["1.2.3", "1.2.4"]);
    expect(aiRoiEnabled(state)).toBe(true);
    expect(aiRoiEnabled({ ...state, busy: true })).toBe(false);
  });

  it("submit requires every proposal decided, exactly once", () => {
    let state = selectSeries(initialState(), "st", "se", ["1.2.3"]);
    state = proposalsReceived(state, twoProposals());
    expect(submitEnabled(state)).toBe(false);
    state = toggleProposal(state, "p1"); // accepted
    expect(submitEnabled(state)).toBe(false); // p2 still proposed
    state = toggleProposal(state, "p2"); // accepted
    state = toggleProposal(state, "p2"); // rejected
    expect(submitEnabled(state)).toBe(true);
    expect(decisions(state)).toEqual({ p1: "accepted", p2: "rejected" });
    state = submitted(state, "1.2.77");
    expect(submitEnabled(state)).toBe(false); // one-shot
    expect(toggleProposal(state, "p1")).toBe(state); // decisions frozen
  });

  it("toggle cycles accept -> reject -> accept", () => {
    let state = proposalsReceived(
      selectSeries(initialState(), "st", "se", ["1.2.3"]),
      twoProposals(),
    );
    state = toggleProposal(state, "p1");
    expect(state.proposals[0].status).toBe("accepted");
    state = toggleProposal(state, "p1");
    expect(state.proposals[0].status).toBe("rejected");
    state = toggleProposal(state, "p1");
    expect(state.proposals[0].status).toBe("accepted");
    expect(state.proposals[1].status).toBe("proposed");
  });

  it("zero proposals raises the notice and keeps submit disabled", () => {
    const state = proposalsReceived(
      selectSeries(initialState(), "st", "se", ["1.2.3"]),
      { session_id: "s", slice_uid: "1.2.3", dnn_uid: "1.2.9", proposals: [] },
    );
    expect(state.banner?.text).toMatch(/no ROI proposed/);
    expect(submitEnabled(state)).toBe(false);
  });

  it("navigation wraps and abandons the pending session", () => {
    let state = selectSeries(initialState(), "st", "se", ["a", "b", "c"]);
    state = proposalsReceived(state, twoProposals());
    state = stepSlice(state, -1);
    expect(state.sliceIndex).toBe(2); // wrapped to the end
    expect(state.proposals).toHaveLength(0);
    expect(state.sessionId).toBeUndefined();
    state = gotoSlice(state, 5); // 5 mod 3
    expect(state.sliceIndex).toBe(2);
  });
});
