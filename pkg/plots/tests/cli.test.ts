import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { makeCsv } from "./util";

const ROOT = fileURLToPath(new URL("..", import.meta.url));
const CLI = join(ROOT, "dist", "cli.js");
const DECAY = join(ROOT, "fixtures", "snapshot_decay.csv");

function run(args: string[]): { status: number; stderr: string } {
  try {
    execFileSync(process.execPath, [CLI, ...args], { stdio: ["ignore", "pipe", "pipe"] });
    return { status: 0, stderr: "" };
  } catch (err) {
    const e = err as { status?: number; stderr?: Buffer };
    return { status: e.status ?? -1, stderr: e.stderr?.toString() ?? "" };
  }
}

describe("plots CLI", () => {
  it("renders a line figure with sidecar", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-cli-"));
    const out = join(dir, "decay.svg");
    const r = run(["render", DECAY, "--kind", "line", "--x", "L", "--logx", "--logy", "--out", out]);
    expect(r.status).toBe(0);
    expect(readFileSync(out, "utf8").startsWith("<svg ")).toBe(true);
    expect(existsSync(out + ".json")).toBe(true);
  });

  it("renders a heatmap to any extension", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-cli-"));
    const csv = join(dir, "grid.csv");
    writeFileSync(csv, makeCsv([
      { point_id: "0", snr_db: "10.0", L: "16", axis1_name: "snr_db", axis1_value: "10.0", axis2_name: "L", axis2_value: "16", md: "0.3" },
      { point_id: "1", snr_db: "20.0", L: "16", axis1_name: "snr_db", axis1_value: "20.0", axis2_name: "L", axis2_value: "16", md: "0.1" },
    ]));
    const out = join(dir, "grid.png");
    const r = run(["render", csv, "--kind", "heatmap", "--x", "rel_noise", "--y", "L", "--stat", "median", "--out", out]);
    expect(r.status).toBe(0);
    expect(readFileSync(out, "utf8").startsWith("<svg ")).toBe(true);
  });

  it("exits 3 on schema errors", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-cli-"));
    const r = run(["render", DECAY, "--kind", "line", "--x", "sigma", "--out", join(dir, "o.svg")]);
    expect(r.status).toBe(3);
    expect(r.stderr).toMatch(/schema error/);
  });

  it("exits 4 when no successful trials remain", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-cli-"));
    const csv = join(dir, "failed.csv");
    writeFileSync(csv, makeCsv([{ md: "nan", error_code: "esprit_failed" }]));
    const r = run(["render", csv, "--kind", "line", "--x", "L", "--out", join(dir, "o.svg")]);
    expect(r.status).toBe(4);
    expect(r.stderr).toMatch(/empty selection/);
  });

  it("exits 5 when the CSV file is missing", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-cli-"));
    const r = run(["render", join(dir, "nope.csv"), "--kind", "line", "--x", "L", "--out", join(dir, "o.svg")]);
    expect(r.status).toBe(5);
    expect(r.stderr).toMatch(/io error/);
  });

  it("exits 1 on usage errors", () => {
    const r = run(["render", DECAY, "--x", "L", "--out", "/tmp/o.svg"]);
    expect(r.status).toBe(1);
  });
});
