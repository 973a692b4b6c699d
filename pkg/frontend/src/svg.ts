/**
 * Minimal deterministic SVG scene builder.
 *
 * No external renderer: elements are emitted as strings with all numbers
 * passed through one fixed formatter, so identical inputs produce
 * byte-identical documents. Style is fixed (monospace labels, no CSS, no
 * timestamps or generator comments).
 */

export interface Extent {
  min: number;
  max: number;
}

/** Numeric range of `values` padded by `pad` (fraction of the span). */
export function extent(values: number[], pad = 0.05): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (!(min <= max)) throw new Error("extent of no values");
  let span = max - min;
  if (span === 0) span = Math.abs(min) || 1; // degenerate: fabricate a span
  return { min: min - pad * span, max: max + pad * span };
}

/** Grow whichever range is too narrow so x and y share one unit scale. */
export function equalAspect(x: Extent, y: Extent, boxW: number, boxH: number): [Extent, Extent] {
  const ux = (x.max - x.min) / boxW;
  const uy = (y.max - y.min) / boxH;
  const u = Math.max(ux, uy);
  const growX = (u * boxW - (x.max - x.min)) / 2;
  const growY = (u * boxH - (y.max - y.min)) / 2;
  return [
    { min: x.min - growX, max: x.max + growX },
    { min: y.min - growY, max: y.max + growY },
  ];
}

/** Pixel coordinate, rounded so output bytes do not depend on FP noise. */
export function px(v: number): string {
  const r = Math.round(v * 100) / 100;
  return (Object.is(r, -0) ? 0 : r).toString();
}

/** Tick label: up to 6 significant digits, trailing zeros trimmed. */
export function fmt(v: number): string {
  if (v === 0) return "0";
  const s = v.toPrecision(6);
  return s.includes(".") && !s.includes("e")
    ? s.replace(/\.?0+$/, "")
    : s;
}

function niceStep(rough: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const frac = rough / mag;
  if (frac <= 1) return mag;
  if (frac <= 2) return 2 * mag;
  if (frac <= 5) return 5 * mag;
  return 10 * mag;
}

/** Round tick positions covering the extent, about `count` of them. */
export function ticks(e: Extent, count = 6): number[] {
  const step = niceStep((e.max - e.min) / count);
  const out: number[] = [];
  for (let v = Math.ceil(e.min / step) * step; v <= e.max + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export class LinearScale {
  constructor(
    readonly domain: Extent,
    readonly r0: number,
    readonly r1: number,
  ) {}

  at(v: number): number {
    const t = (v - this.domain.min) / (this.domain.max - this.domain.min);
    return this.r0 + t * (this.r1 - this.r0);
  }
}

export interface FrameOptions {
  width: number;
  height: number;
  x: Extent;
  y: Extent;
  title: string;
  xlabel: string;
  ylabel: string;
}

const ML = 62;
const MR = 16;
const MT = 34;
const MB = 46;
const FONT = 'font-family="monospace"';

/** Axes, ticks and labels; exposes scales for the plot body. */
export class Frame {
  readonly x: LinearScale;
  readonly y: LinearScale;
  readonly parts: string[] = [];

  constructor(readonly opts: FrameOptions) {
    this.x = new LinearScale(opts.x, ML, opts.width - MR);
    this.y = new LinearScale(opts.y, opts.height - MB, MT); // y grows upward
    const w = opts.width;
    const h = opts.height;
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${w}" height="${h}" viewBox="0 0 ${w} ${h}">`,
      `<rect width="${w}" height="${h}" fill="white"/>`,
      `<text x="${px(w / 2)}" y="20" text-anchor="middle" font-size="14" ${FONT}>${esc(opts.title)}</text>`,
    );
    for (const t of ticks(opts.x)) {
      const cx = px(this.x.at(t));
      this.parts.push(
        `<line x1="${cx}" y1="${px(h - MB)}" x2="${cx}" y2="${px(h - MB + 4)}" stroke="black"/>`,
        `<line x1="${cx}" y1="${MT}" x2="${cx}" y2="${px(h - MB)}" stroke="#dddddd" stroke-width="0.5"/>`,
        `<text x="${cx}" y="${px(h - MB + 16)}" text-anchor="middle" font-size="10" ${FONT}>${fmt(t)}</text>`,
      );
    }
    for (const t of ticks(opts.y)) {
      const cy = px(this.y.at(t));
      this.parts.push(
        `<line x1="${px(ML - 4)}" y1="${cy}" x2="${ML}" y2="${cy}" stroke="black"/>`,
        `<line x1="${ML}" y1="${cy}" x2="${px(w - MR)}" y2="${cy}" stroke="#dddddd" stroke-width="0.5"/>`,
        `<text x="${px(ML - 7)}" y="${px(this.y.at(t) + 3)}" text-anchor="end" font-size="10" ${FONT}>${fmt(t)}</text>`,
      );
    }
    this.parts.push(
      `<rect x="${ML}" y="${MT}" width="${px(w - ML - MR)}" height="${px(h - MT - MB)}" fill="none" stroke="black"/>`,
      `<text x="${px((ML + w - MR) / 2)}" y="${px(h - 10)}" text-anchor="middle" font-size="12" ${FONT}>${esc(opts.xlabel)}</text>`,
      `<text x="16" y="${px((MT + h - MB) / 2)}" text-anchor="middle" font-size="12" ${FONT} transform="rotate(-90 16 ${px((MT + h - MB) / 2)})">${esc(opts.ylabel)}</text>`,
    );
  }

  /** Plot-box size in pixels, for aspect computations. */
  static box(width: number, height: number): [number, number] {
    return [width - ML - MR, height - MT - MB];
  }

  polyline(pts: [number, number][], stroke: string, width = 1.2): void {
    const coords = pts.map(([vx, vy]) => `${px(this.x.at(vx))},${px(this.y.at(vy))}`);
    this.parts.push(
      `<polyline points="${coords.join(" ")}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  marker(kind: string, vx: number, vy: number): void {
    const cx = this.x.at(vx);
    const cy = this.y.at(vy);
    this.parts.push(markerGlyph(kind, cx, cy));
  }

  dot(vx: number, vy: number, fill: string, r = 3): void {
    this.parts.push(
      `<circle cx="${px(this.x.at(vx))}" cy="${px(this.y.at(vy))}" r="${r}" fill="${fill}"/>`,
    );
  }

  vline(vx: number, stroke: string, dash: string | null = null): void {
    const cx = px(this.x.at(vx));
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${cx}" y1="${MT}" x2="${cx}" y2="${px(this.opts.height - MB)}" stroke="${stroke}" stroke-width="1"${d}/>`,
    );
  }

  note(text: string): void {
    this.parts.push(
      `<text x="${px(this.opts.width - MR)}" y="${MT - 6}" text-anchor="end" font-size="10" ${FONT}>${esc(text)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

/** Verdict markers: X conduction, hyphen hopping, & localized, dot undecided. */
export const KIND_COLORS: Record<string, string> = {
  C: "#c62828",
  H: "#1565c0",
  L: "#2e7d32",
  U: "#9e9e9e",
  X: "#ef6c00",
};

export function markerGlyph(kind: string, cx: number, cy: number): string {
  const c = KIND_COLORS[kind] ?? "#000000";
  const s = 3.2;
  switch (kind) {
    case "C":
      return (
        `<path d="M${px(cx - s)} ${px(cy - s)}L${px(cx + s)} ${px(cy + s)}` +
        `M${px(cx - s)} ${px(cy + s)}L${px(cx + s)} ${px(cy - s)}" stroke="${c}" stroke-width="1.3"/>`
      );
    case "H":
      return `<line x1="${px(cx - s)}" y1="${px(cy)}" x2="${px(cx + s)}" y2="${px(cy)}" stroke="${c}" stroke-width="1.3"/>`;
    case "L":
      return `<text x="${px(cx)}" y="${px(cy + 3)}" text-anchor="middle" font-size="9" font-family="monospace" fill="${c}">&amp;</text>`;
    case "X": {
      const d =
        `M${px(cx)} ${px(cy - s)}L${px(cx + s)} ${px(cy)}` +
        `L${px(cx)} ${px(cy + s)}L${px(cx - s)} ${px(cy)}Z`;
      return `<path d="${d}" fill="none" stroke="${c}" stroke-width="1.1"/>`;
    }
    default:
      return `<circle cx="${px(cx)}" cy="${px(cy)}" r="1.6" fill="${c}"/>`;
  }
}
