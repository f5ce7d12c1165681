import { describe, expect, it, vi } from "vitest";

import {
  applyTransform,
  buildOverlay,
  overlayTransform,
  pointsAttribute,
  ROI_COLORS,
} from "../src/overlay";
import type { RoiView } from "../src/state";

function roi(id: string, status: RoiView["status"], points: [number, number][]): RoiView {
  return { id, slice_ref_uid: "1.2.f", points, label: id, confidence: 0.5, status };
}

// a synthetic cross centered at pixel (32, 32) in a 64x64 slice
const CROSS: [number, number][] = [
  [28, 8], [36, 8], [36, 28], [56, 28], [56, 36], [36, 36],
  [36, 56], [28, 56], [28, 36], [8, 36], [8, 28], [28, 28],
];

describe("ROI overlay", () => {
  it("status drives the stroke color and dimming", () => {
    const svg = buildOverlay(64, 64, [
      roi("p1", "proposed", CROSS),
      roi("p2", "accepted", CROSS),
      roi("p3", "rejected", CROSS),
    ], () => {});
    const polys = svg.querySelectorAll("polygon");
    expect(polys[0].getAttribute("stroke")).toBe(ROI_COLORS.proposed);
    expect(polys[1].getAttribute("stroke")).toBe(ROI_COLORS.accepted);
    expect(polys[2].getAttribute("stroke")).toBe(ROI_COLORS.rejected);
    expect(polys[2].getAttribute("opacity")).toBe("0.35");
    expect(polys[0].getAttribute("opacity")).toBeNull();
  });

  it("clicking a polygon reports its id", () => {
    const onToggle = vi.fn();
    const svg = buildOverlay(64, 64, [roi("p7", "proposed", CROSS)], onToggle);
    svg.querySelector("polygon")!.dispatchEvent(new MouseEvent("click"));
    expect(onToggle).toHaveBeenCalledWith("p7");
  });

  it("viewBox matches the native pixel grid so the raster transform applies", () => {
    const svg = buildOverlay(64, 48, [roi("p1", "proposed", CROSS)], () => {});
    expect(svg.getAttribute("viewBox")).toBe("0 0 64 48");
    expect(svg.getAttribute("preserveAspectRatio")).toBe("none");
  });

  it("cross fixture maps through the same affine transform as the image", () => {
    // slice displayed at 512x384 from a 64x48 native grid
    const t = overlayTransform(64, 48, 512, 384);
    expect(t).toEqual({ sx: 8, sy: 8 });
    // every cross vertex lands exactly where the image pixel lands
    for (const [x, y] of CROSS) {
      const [vx, vy] = applyTransform([x, y], t);
      expect(vx).toBe(x * (512 / 64));
      expect(vy).toBe(y * (384 / 48));
    }
    // non-uniform stretching keeps axes independent
    const skewed = overlayTransform(64, 48, 128, 480);
    const [cx, cy] = applyTransform([32, 32], skewed);
    expect(cx).toBe(64);
    expect(cy).toBe(320);
  });

  it("serializes points as an SVG points attribute", () => {
    expect(pointsAttribute([[1, 2], [3.5, 4]])).toBe("1,2 3.5,4");
  });
});
