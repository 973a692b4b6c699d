/** Image output: SVG as-is, PNG rasterized in-process. */

import { writeFileSync } from "node:fs";
import { Resvg } from "@resvg/resvg-js";

export type ImageFormat = "svg" | "png";

export function renderImage(svg: string, format: ImageFormat): Buffer {
  if (format === "svg") return Buffer.from(svg, "utf-8");
  const resvg = new Resvg(svg, {
    background: "white",
    font: { loadSystemFonts: true },
  });
  return Buffer.from(resvg.render().asPng());
}

export function writeImage(svg: string, out: string, format: ImageFormat): number {
  const bytes = renderImage(svg, format);
  writeFileSync(out, bytes);
  return bytes.length;
}
