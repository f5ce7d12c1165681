/** SVG ROI overlay.
 *
 * The overlay shares the slice raster's affine transform by construction:
 * its viewBox is the native pixel grid (0 0 columns rows) and the element
 * is stretched over the exact same box as the <img>, so a polyline vertex
 * at pixel (x, y) lands on the same screen point as that image pixel.
 */

import type { RoiView } from "./state";

const SVG_NS = "http://www.w3.org/2000/svg";

export const ROI_COLORS: Record<string, string> = {
  proposed: "#e53935", // red: awaiting review
  accepted: "#43a047", // green: validated
  rejected: "#9e9e9e", // dimmed
};

export function pointsAttribute(points: [number, number][]): string {
  return points.map(([x, y]) => `${x},${y}`).join(" ");
}

/** Scale factors mapping native pixel coordinates to element coordinates. */
export function overlayTransform(
  columns: number,
  rows: number,
  displayWidth: number,
  displayHeight: number,
): { sx: number; sy: number } {
  return { sx: displayWidth / columns, sy: displayHeight / rows };
}

export function applyTransform(
  point: [number, number],
  t: { sx: number; sy: number },
): [number, number] {
  return [point[0] * t.sx, point[1] * t.sy];
}

export function buildOverlay(
  columns: number,
  rows: number,
  proposals: RoiView[],
  onToggle: (id: string) => void,
): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${columns} ${rows}`);
  svg.setAttribute("preserveAspectRatio", "none");
  svg.classList.add("roi-overlay");
  for (const roi of proposals) {
    const poly = document.createElementNS(SVG_NS, "polygon");
    poly.setAttribute("points", pointsAttribute(roi.points));
    poly.setAttribute("data-roi-id", roi.id);
    poly.setAttribute("data-status", roi.status);
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", ROI_COLORS[roi.status]);
    poly.setAttribute("stroke-width", "1.5");
    poly.setAttribute("vector-effect", "non-scaling-stroke");
    if (roi.status === "rejected") poly.setAttribute("opacity", "0.35");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${roi.label} (confidence ${roi.confidence.toFixed(2)})`;
    poly.appendChild(title);
    poly.addEventListener("click", () => onToggle(roi.id));
    svg.appendChild(poly);
  }
  return svg;
}
