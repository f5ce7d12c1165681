/** The two header panels: patient info on the left, clinical on the right. */

import type { SliceMetadata } from "./api";

export const PATIENT_FIELDS: [string, keyof SliceMetadata][] = [
  ["Patient name", "PatientName"],
  ["Patient ID", "PatientID"],
  ["Birth date", "PatientBirthDate"],
  ["Sex", "PatientSex"],
];

export const CLINICAL_FIELDS: [string, keyof SliceMetadata][] = [
  ["Accession number", "AccessionNumber"],
  ["Institution", "InstitutionName"],
  ["Referring physician", "ReferringPhysicianName"],
  ["Study date", "StudyDate"],
  ["Study description", "StudyDescription"],
  ["Study ID", "StudyID"],
  ["Study instance UID", "StudyInstanceUID"],
  ["Study time", "StudyTime"],
];

function panel(
  title: string,
  fields: [string, keyof SliceMetadata][],
  meta: Partial<SliceMetadata>,
): HTMLElement {
  const box = document.createElement("section");
  box.className = "info-block";
  const heading = document.createElement("h3");
  heading.textContent = title;
  box.appendChild(heading);
  const list = document.createElement("dl");
  for (const [label, key] of fields) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    const value = meta[key];
    // values render verbatim; absent tags are blank, never an error
    dd.textContent = value === undefined || value === null ? "" : String(value);
    dd.dataset.field = String(key);
    list.appendChild(dt);
    list.appendChild(dd);
  }
  box.appendChild(list);
  return box;
}

export function renderInfoBlocks(meta: Partial<SliceMetadata>): {
  left: HTMLElement;
  right: HTMLElement;
} {
  return {
    left: panel("Patient", PATIENT_FIELDS, meta),
    right: panel("Study", CLINICAL_FIELDS, meta),
  };
}
