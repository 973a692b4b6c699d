/**
 * End-to-end runs of the built scripts (dist/), so `npm test` exercises the
 * same entry points a user calls. The build step runs before vitest.
 */

import { beforeAll, describe, expect, it } from "vitest";
import { spawnSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

const ROOT = fileURLToPath(new URL("..", import.meta.url));
const FIXTURES = join(ROOT, "tests", "fixtures");
const BIN = join(ROOT, "dist", "bin");

let workDir: string;

function run(script: string, args: string[]): { status: number; stdout: string; stderr: string } {
  const res = spawnSync("node", [join(BIN, script), ...args], { encoding: "utf-8" });
  return { status: res.status ?? -1, stdout: res.stdout, stderr: res.stderr };
}

beforeAll(() => {
  expect(existsSync(BIN), "run `npm run build` before the tests (npm test does)").toBe(true);
  workDir = mkdtempSync(join(tmpdir(), "plots-bin-"));
});

describe("plot-trajectory", () => {
  it("renders nested orbits with turning points, byte-stable across runs", () => {
    const out1 = join(workDir, "traj1.svg");
    const out2 = join(workDir, "traj2.svg");
    const args = [
      "--input", join(FIXTURES, "traj_quartic_a.csv"),
      "--input", join(FIXTURES, "traj_quartic_b.csv"),
      "--turning", join(FIXTURES, "turning_quartic.json"),
      "--out", out1,
    ];
    const first = run("plot-trajectory.js", args);
    expect(first.status).toBe(0);
    expect(first.stdout).toContain(`wrote ${out1}`);
    const second = run("plot-trajectory.js", [...args.slice(0, -2), "--out", out2]);
    expect(second.status).toBe(0);
    expect(readFileSync(out1)).toEqual(readFileSync(out2));
    expect(readFileSync(out1, "utf-8")).toContain("<svg ");
  });

  it("renders the two-sided spiral of the double well", () => {
    const out = join(workDir, "spiral.svg");
    const res = run("plot-trajectory.js", [
      "--input", join(FIXTURES, "traj_doublewell.csv"),
      "--out", out,
    ]);
    expect(res.status).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("polyline");
  });

  it("emits PNG on request", () => {
    const out = join(workDir, "traj.png");
    const res = run("plot-trajectory.js", [
      "--input", join(FIXTURES, "traj_quartic_a.csv"),
      "--out", out,
      "--format", "png",
    ]);
    expect(res.status).toBe(0);
    const bytes = readFileSync(out);
    expect([...bytes.subarray(0, 4)]).toEqual([0x89, 0x50, 0x4e, 0x47]);
    expect(bytes.length).toBeGreaterThan(1000);
  });

  it("fails with the column names on a schema mismatch", () => {
    const bad = join(workDir, "bad.csv");
    writeFileSync(bad, "# bandsim 0.1.0\n# {}\nt,re_x\n0,0\n");
    const res = run("plot-trajectory.js", ["--input", bad, "--out", join(workDir, "x.svg")]);
    expect(res.status).toBe(2);
    expect(res.stderr).toMatch(/missing column\(s\): im_x, re_p, im_p, energy_drift/);
  });

  it("fails with 'no rows' on an empty-but-valid file", () => {
    const empty = join(workDir, "empty.csv");
    writeFileSync(empty, "# bandsim 0.1.0\n# {}\nt,re_x,im_x,re_p,im_p,energy_drift\n");
    const res = run("plot-trajectory.js", ["--input", empty, "--out", join(workDir, "x.svg")]);
    expect(res.status).toBe(2);
    expect(res.stderr).toMatch(/no rows/);
  });
});

describe("plot-band-map", () => {
  it("renders the scan-line grid", () => {
    const out = join(workDir, "map.svg");
    const res = run("plot-band-map.js", [
      "--input", join(FIXTURES, "grid_line.csv"),
      "--out", out,
    ]);
    expect(res.status).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("X conduction");
    expect(svg).toContain('stroke="#c62828"');
  });

  it("renders an all-localized grid without conduction markers", () => {
    const out = join(workDir, "localized.svg");
    const res = run("plot-band-map.js", [
      "--input", join(FIXTURES, "grid_localized.csv"),
      "--out", out,
    ]);
    expect(res.status).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain(">&amp;<");
    expect(svg).not.toContain('stroke="#c62828" stroke-width="1.3"');
  });
});

describe("plot-band-zoom", () => {
  it("overlays refined edges when given", () => {
    const out = join(workDir, "zoom.svg");
    const res = run("plot-band-zoom.js", [
      "--input", join(FIXTURES, "zoom_window.csv"),
      "--edges", join(FIXTURES, "edges_window.csv"),
      "--out", out,
    ]);
    expect(res.status).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("stroke-dasharray");
  });

  it("names missing edge columns", () => {
    const bad = join(workDir, "edges_bad.csv");
    writeFileSync(bad, "# bandsim 0.1.0\n# {}\nim_e,re_lo\n-0.7,0.1\n");
    const res = run("plot-band-zoom.js", [
      "--input", join(FIXTURES, "zoom_window.csv"),
      "--edges", bad,
      "--out", join(workDir, "x.svg"),
    ]);
    expect(res.status).toBe(2);
    expect(res.stderr).toMatch(/band edges input missing column\(s\): re_hi/);
  });
});

describe("plot-hyperbola", () => {
  it("overlays the fitted curve from the saved summary", () => {
    const out = join(workDir, "hyp.svg");
    const res = run("plot-hyperbola.js", [
      "--input", join(FIXTURES, "tuntime_measured.csv"),
      "--summary", join(FIXTURES, "tuntime_summary.txt"),
      "--out", out,
    ]);
    expect(res.status).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("<polyline");
    expect(svg).toContain("c = 14.5713");
  });

  it("omits the curve and warns when no summary is given", () => {
    const out = join(workDir, "hyp_bare.svg");
    const res = run("plot-hyperbola.js", [
      "--input", join(FIXTURES, "tuntime_synth.csv"),
      "--out", out,
    ]);
    expect(res.status).toBe(0);
    expect(res.stderr).toContain("fit summary missing; curve omitted");
    expect(readFileSync(out, "utf-8")).not.toContain("<polyline");
  });
});
