#!/usr/bin/env node
/** Band-map figure: verdict markers over the complex-energy plane. */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { readCsvArtifact } from "../artifact.js";
import { renderBandMap } from "../plots.js";
import { writeImage, ImageFormat } from "../render.js";
import { fail, FORMAT_CHOICES, report } from "./common.js";

async function main(): Promise<void> {
  const argv = await yargs(hideBin(process.argv))
    .option("input", {
      type: "string",
      demandOption: true,
      describe: "sweep grid CSV",
    })
    .option("out", { type: "string", demandOption: true })
    .option("format", { choices: FORMAT_CHOICES, default: "svg" as const })
    .strict()
    .parse();

  const svg = renderBandMap(readCsvArtifact(argv.input));
  report(argv.out, writeImage(svg, argv.out, argv.format as ImageFormat));
}

main().catch(fail);
