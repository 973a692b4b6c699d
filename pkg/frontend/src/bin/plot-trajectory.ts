#!/usr/bin/env node
/** Trajectory-plane figure: Re x vs Im x curves from trace CSVs. */

import { basename } from "node:path";
import { readFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { z } from "zod";
import { readCsvArtifact } from "../artifact.js";
import { renderTrajectory } from "../plots.js";
import { writeImage, ImageFormat } from "../render.js";
import { fail, FORMAT_CHOICES, report } from "./common.js";

const TurningDoc = z.object({
  turning_points: z.array(z.tuple([z.number(), z.number()])),
});

async function main(): Promise<void> {
  const argv = await yargs(hideBin(process.argv))
    .option("input", {
      type: "string",
      array: true,
      demandOption: true,
      describe: "trace CSV file(s); each becomes one curve",
    })
    .option("turning", {
      type: "string",
      describe: "turning-point JSON to overlay as dots",
    })
    .option("out", { type: "string", demandOption: true })
    .option("format", { choices: FORMAT_CHOICES, default: "svg" as const })
    .option("size", { type: "number", default: 640 })
    .strict()
    .parse();

  const inputs = argv.input.map((path) => ({
    name: basename(path),
    art: readCsvArtifact(path),
  }));
  let turningPoints: [number, number][] = [];
  if (argv.turning !== undefined) {
    const doc = TurningDoc.parse(JSON.parse(readFileSync(argv.turning, "utf-8")));
    turningPoints = doc.turning_points;
  }
  const svg = renderTrajectory(inputs, turningPoints, argv.size);
  report(argv.out, writeImage(svg, argv.out, argv.format as ImageFormat));
}

main().catch(fail);
