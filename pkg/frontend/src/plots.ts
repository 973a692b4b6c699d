/**
 * The four figure renderers, as pure functions from parsed artifacts to an
 * SVG document. File handling and flag parsing live in the bin scripts.
 */

import { ArtifactError, checkColumns, CsvArtifact, num } from "./artifact.js";
import { equalAspect, extent, fmt, Frame, markerGlyph } from "./svg.js";

export const TRAJECTORY_COLUMNS = ["t", "re_x", "im_x", "re_p", "im_p", "energy_drift"];
export const GRID_COLUMNS = [
  "re_e",
  "im_e",
  "kind",
  "direction",
  "hop_count",
  "first_hop_time",
  "mean_hop_time",
];
export const EDGE_COLUMNS = ["im_e", "re_lo", "re_hi", "direction", "flagged"];
export const TUNTIME_COLUMNS = ["im_e", "mean_time", "product"];

const PALETTE = ["#1565c0", "#c62828", "#2e7d32", "#6a1b9a", "#ef6c00", "#00838f"];
const LEGEND = "X conduction   - hopping   & localized   . undecided";

function requireRows(name: string, art: CsvArtifact, columns: string[]): void {
  checkColumns(name, art.columns, columns);
  if (art.rows.length === 0) throw new ArtifactError(`no rows in ${name}`);
}

/** Re x vs Im x curves, one per input file, with equal-aspect axes. */
export function renderTrajectory(
  inputs: { name: string; art: CsvArtifact }[],
  turningPoints: [number, number][] = [],
  size = 640,
): string {
  if (inputs.length === 0) throw new ArtifactError("no trajectory inputs");
  for (const { name, art } of inputs) {
    requireRows(`trajectory ${name}`, art, TRAJECTORY_COLUMNS);
  }
  const xs: number[] = [];
  const ys: number[] = [];
  for (const { art } of inputs) {
    for (const row of art.rows) {
      xs.push(num(row, "re_x"));
      ys.push(num(row, "im_x"));
    }
  }
  for (const [tx, ty] of turningPoints) {
    xs.push(tx);
    ys.push(ty);
  }
  const [boxW, boxH] = Frame.box(size, size);
  const [ex, ey] = equalAspect(extent(xs), extent(ys), boxW, boxH);
  const frame = new Frame({
    width: size,
    height: size,
    x: ex,
    y: ey,
    title: "complex-plane trajectory",
    xlabel: "Re x",
    ylabel: "Im x",
  });
  inputs.forEach(({ art }, i) => {
    frame.polyline(
      art.rows.map((row) => [num(row, "re_x"), num(row, "im_x")] as [number, number]),
      PALETTE[i % PALETTE.length],
    );
  });
  for (const [tx, ty] of turningPoints) frame.dot(tx, ty, "black", 3.5);
  return frame.render();
}

function gridMarkers(frame: Frame, art: CsvArtifact): void {
  for (const row of art.rows) {
    frame.marker(row.kind, num(row, "re_e"), num(row, "im_e"));
  }
}

/** Energy-plane verdict scatter: one marker per grid cell. */
export function renderBandMap(art: CsvArtifact, width = 760, height = 520): string {
  requireRows("band map", art, GRID_COLUMNS);
  const frame = new Frame({
    width,
    height,
    x: extent(art.rows.map((r) => num(r, "re_e"))),
    y: extent(art.rows.map((r) => num(r, "im_e"))),
    title: "energy-plane behavior map",
    xlabel: "Re E",
    ylabel: "Im E",
  });
  frame.note(LEGEND);
  gridMarkers(frame, art);
  return frame.render();
}

/**
 * Narrow-window verdict scatter with refined band edges overlaid as
 * vertical lines (dashed; dotted when the refinement was flagged).
 */
export function renderBandZoom(
  art: CsvArtifact,
  edges: CsvArtifact | null = null,
  width = 760,
  height = 520,
): string {
  requireRows("band zoom", art, GRID_COLUMNS);
  if (edges !== null) checkColumns("band edges", edges.columns, EDGE_COLUMNS);
  const frame = new Frame({
    width,
    height,
    x: extent(art.rows.map((r) => num(r, "re_e"))),
    y: extent(art.rows.map((r) => num(r, "im_e"))),
    title: "band edge zoom",
    xlabel: "Re E",
    ylabel: "Im E",
  });
  frame.note(LEGEND);
  if (edges !== null) {
    for (const row of edges.rows) {
      const dash = row.flagged === "1" ? "1 3" : "5 3";
      frame.vline(num(row, "re_lo"), "#555555", dash);
      frame.vline(num(row, "re_hi"), "#555555", dash);
    }
  }
  gridMarkers(frame, art);
  return frame.render();
}

/** Mean hop time vs |Im E| scatter, with the c/|Im E| curve when c is known. */
export function renderHyperbola(
  art: CsvArtifact,
  c: number | null = null,
  width = 640,
  height = 480,
): string {
  requireRows("tunneling times", art, TUNTIME_COLUMNS);
  const pts = art.rows.map(
    (r) => [Math.abs(num(r, "im_e")), num(r, "mean_time")] as [number, number],
  );
  const ex = extent(pts.map((p) => p[0]));
  const ys = pts.map((p) => p[1]);
  if (c !== null) {
    ys.push(c / ex.min, c / ex.max); // keep the whole curve in frame
  }
  const frame = new Frame({
    width,
    height,
    x: ex,
    y: extent(ys),
    title: "mean hop time vs |Im E|",
    xlabel: "|Im E|",
    ylabel: "mean hop time",
  });
  if (c !== null) {
    const n = 120;
    const curve: [number, number][] = [];
    for (let i = 0; i <= n; i++) {
      const x = ex.min + ((ex.max - ex.min) * i) / n;
      curve.push([x, c / x]);
    }
    frame.polyline(curve, "#c62828", 1.4);
    frame.note(`c = ${fmt(c)}`);
  }
  for (const [x, y] of pts) frame.dot(x, y, "#1565c0", 3.5);
  return frame.render();
}

export { markerGlyph };
