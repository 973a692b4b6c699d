#!/usr/bin/env node
/** Hyperbola figure: mean hop time vs |Im E| with the fitted c/|Im E| curve. */

import { readFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { parseFitSummary, readCsvArtifact } from "../artifact.js";
import { renderHyperbola } from "../plots.js";
import { writeImage, ImageFormat } from "../render.js";
import { fail, FORMAT_CHOICES, report } from "./common.js";

async function main(): Promise<void> {
  const argv = await yargs(hideBin(process.argv))
    .option("input", {
      type: "string",
      demandOption: true,
      describe: "tunneling-time CSV",
    })
    .option("summary", {
      type: "string",
      describe: "saved fit summary (the tuntime command's printed line)",
    })
    .option("out", { type: "string", demandOption: true })
    .option("format", { choices: FORMAT_CHOICES, default: "svg" as const })
    .strict()
    .parse();

  let c: number | null = null;
  if (argv.summary !== undefined) {
    c = parseFitSummary(readFileSync(argv.summary, "utf-8"));
  } else {
    process.stderr.write("warning: fit summary missing; curve omitted\n");
  }
  const svg = renderHyperbola(readCsvArtifact(argv.input), c);
  report(argv.out, writeImage(svg, argv.out, argv.format as ImageFormat));
}

main().catch(fail);
