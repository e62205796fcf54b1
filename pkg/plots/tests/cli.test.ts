import assert from "node:assert/strict";
import { spawnSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync, statSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { test } from "node:test";

const DIST = join(__dirname, "..", "src");
const FIX = join(__dirname, "..", "..", "tests", "fixtures");

function run(script: string, ...args: string[]) {
  return spawnSync(process.execPath, [join(DIST, script), ...args], {
    encoding: "utf-8",
  });
}

function outDir(): string {
  return mkdtempSync(join(tmpdir(), "plots-cli-"));
}

test("fig_oscillation writes a nonempty svg and exits 0", () => {
  const out = join(outDir(), "osc.svg");
  const res = run("fig_oscillation.js", join(FIX, "oscillating.jsonl"), out);
  assert.equal(res.status, 0, res.stderr);
  assert.ok(statSync(out).size > 0);
  assert.match(readFileSync(out, "utf-8"), /^<svg /);
});

test("fig_oscillation refuses an empty input with nonzero exit and no file", () => {
  const dir = outDir();
  const empty = join(dir, "empty.jsonl");
  writeFileSync(empty, "");
  const out = join(dir, "osc.svg");
  const res = run("fig_oscillation.js", empty, out);
  assert.notEqual(res.status, 0);
  assert.match(res.stderr, /empty/);
  assert.ok(!existsSync(out), "no output file may be written on failure");
});

test("fig_regimes renders from two traces plus the oracle file", () => {
  const out = join(outDir(), "regimes.svg");
  const res = run("fig_regimes.js", join(FIX, "inexact.jsonl"),
                  join(FIX, "exact.jsonl"), join(FIX, "oracle.json"), out);
  assert.equal(res.status, 0, res.stderr);
  assert.ok(statSync(out).size > 0);
});

test("fig_regimes usage error on missing arguments", () => {
  const res = run("fig_regimes.js", join(FIX, "inexact.jsonl"));
  assert.equal(res.status, 2);
  assert.match(res.stderr, /usage/);
});

test("fig_loglog renders the summary and exits 0", () => {
  const out = join(outDir(), "loglog.svg");
  const res = run("fig_loglog.js", join(FIX, "energy_summary.csv"), out);
  assert.equal(res.status, 0, res.stderr);
  const svg = readFileSync(out, "utf-8");
  assert.match(svg, /data-x-scale="log"/);
  assert.match(svg, /data-y-scale="log"/);
});

test("fig_loglog refuses an empty summary with nonzero exit", () => {
  const dir = outDir();
  const empty = join(dir, "empty.csv");
  writeFileSync(empty, "");
  const out = join(dir, "loglog.svg");
  const res = run("fig_loglog.js", empty, out);
  assert.notEqual(res.status, 0);
  assert.ok(!existsSync(out));
});

test("scripts do not mutate their inputs", () => {
  const before = readFileSync(join(FIX, "oscillating.jsonl"), "utf-8");
  run("fig_oscillation.js", join(FIX, "oscillating.jsonl"), join(outDir(), "o.svg"));
  const after = readFileSync(join(FIX, "oscillating.jsonl"), "utf-8");
  assert.equal(before, after);
});
