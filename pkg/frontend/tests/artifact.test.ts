import { describe, expect, it } from "vitest";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import {
  ArtifactError,
  checkColumns,
  num,
  parseFitSummary,
  readCsvArtifact,
} from "../src/artifact.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

describe("readCsvArtifact", () => {
  it("parses the comment header and data rows", () => {
    const art = readCsvArtifact(join(FIXTURES, "grid_localized.csv"));
    expect(art.version).toMatch(/^bandsim \d/);
    expect(art.config["grid.re_step"]).toBe(0.25);
    expect(art.columns).toContain("kind");
    expect(art.rows).toHaveLength(5);
    expect(art.rows.every((r) => r.kind === "L")).toBe(true);
  });

  it("keeps full float precision as strings", () => {
    const art = readCsvArtifact(join(FIXTURES, "traj_quartic_a.csv"));
    expect(num(art.rows[art.rows.length - 1], "t")).toBeCloseTo(3.71, 12);
  });

  it("accepts a header-only file as zero rows", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-"));
    const path = join(dir, "empty.csv");
    writeFileSync(path, "# bandsim 0.1.0\n# {}\nre_e,im_e,kind\n");
    const art = readCsvArtifact(path);
    expect(art.columns).toEqual(["re_e", "im_e", "kind"]);
    expect(art.rows).toHaveLength(0);
  });
});

describe("checkColumns", () => {
  it("names every missing column", () => {
    expect(() => checkColumns("grid", ["re_e"], ["re_e", "im_e", "kind"])).toThrow(
      /grid input missing column\(s\): im_e, kind/,
    );
  });

  it("passes when extras are present", () => {
    checkColumns("grid", ["re_e", "im_e", "kind", "bonus"], ["re_e", "kind"]);
  });
});

describe("num", () => {
  it("names the offending column", () => {
    expect(() => num({ mean_time: "fast" }, "mean_time")).toThrow(
      /non-numeric value "fast" in column mean_time/,
    );
    expect(() => num({}, "im_e")).toThrow(ArtifactError);
  });
});

describe("parseFitSummary", () => {
  it("reads the CLI's printed line", () => {
    expect(parseFitSummary("c=14.57127465028927 relative_residual=0.007 samples=4\n")).toBeCloseTo(
      14.57127465028927,
      12,
    );
  });

  it("reads a JSON document", () => {
    expect(parseFitSummary('{"c": 15.0, "relative_residual": 0}')).toBe(15);
  });

  it("rejects text without a c token", () => {
    expect(() => parseFitSummary("residual=0.1")).toThrow(/no "c=<value>" token/);
  });
});
