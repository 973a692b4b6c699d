#!/usr/bin/env node
/** Band-zoom figure: a narrow energy window with refined edges overlaid. */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { readCsvArtifact } from "../artifact.js";
import { renderBandZoom } from "../plots.js";
import { writeImage, ImageFormat } from "../render.js";
import { fail, FORMAT_CHOICES, report } from "./common.js";

async function main(): Promise<void> {
  const argv = await yargs(hideBin(process.argv))
    .option("input", {
      type: "string",
      demandOption: true,
      describe: "sweep grid CSV of the zoom window",
    })
    .option("edges", {
      type: "string",
      describe: "edge-scan CSV; band edges become vertical lines",
    })
    .option("out", { type: "string", demandOption: true })
    .option("format", { choices: FORMAT_CHOICES, default: "svg" as const })
    .strict()
    .parse();

  const edges = argv.edges === undefined ? null : readCsvArtifact(argv.edges);
  const svg = renderBandZoom(readCsvArtifact(argv.input), edges);
  report(argv.out, writeImage(svg, argv.out, argv.format as ImageFormat));
}

main().catch(fail);
