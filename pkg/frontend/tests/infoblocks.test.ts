import { describe, expect, it } from "vitest";

import { CLINICAL_FIELDS, PATIENT_FIELDS, renderInfoBlocks } from "../src/infoblocks";

describe("info blocks", () => {
  it("shows exactly the patient and clinical tag lists", () => {
    expect(PATIENT_FIELDS.map(([, key]) => key)).toEqual([
      "PatientName",
      "PatientID",
      "PatientBirthDate",
      "PatientSex",
    ]);
    expect(CLINICAL_FIELDS.map(([, key]) => key)).toEqual([
      "AccessionNumber",
      "InstitutionName",
      "ReferringPhysicianName",
      "StudyDate",
      "StudyDescription",
      "StudyID",
      "StudyInstanceUID",
      "StudyTime",
    ]);
  });

  it("renders values into the two panels", () => {
    const { left, right } = renderInfoBlocks({
      PatientName: "DOE^JANE",
      PatientID: "P001",
      StudyDescription: "Brain tumor protocol",
      StudyInstanceUID: "1.2.3.4",
    });
    const get = (panel: HTMLElement, field: string) =>
      panel.querySelector<HTMLElement>(`dd[data-field="${field}"]`)!.textContent;
    expect(get(left, "PatientName")).toBe("DOE^JANE");
    expect(get(left, "PatientID")).toBe("P001");
    expect(get(right, "StudyDescription")).toBe("Brain tumor protocol");
    expect(get(right, "StudyInstanceUID")).toBe("1.2.3.4");
  });

  it("renders blanks for anonymized slices, never crashing", () => {
    const { left, right } = renderInfoBlocks({});
    for (const dd of left.querySelectorAll("dd")) expect(dd.textContent).toBe("");
    for (const dd of right.querySelectorAll("dd")) expect(dd.textContent).toBe("");
  });

  it("passes malformed dates through verbatim", () => {
    const { left } = renderInfoBlocks({ PatientBirthDate: "not-a-date" });
    expect(
      left.querySelector<HTMLElement>('dd[data-field="PatientBirthDate"]')!.textContent,
    ).toBe("not-a-date");
  });
});
