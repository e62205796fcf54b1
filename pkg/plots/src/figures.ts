// The three figure styles. Each function maps input files to an SVG string;
// file writing stays in the CLI entries so these remain pure and testable.

import { loadOracle, loadSummary, loadTrace } from "./data";
import { extent, linearScale, logScale, render, HEIGHT, MARGIN, WIDTH } from "./svg";

const plotRangeX: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
const plotRangeY: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];

export function figOscillation(tracePath: string): string {
  const records = loadTrace(tracePath);
  if (records.some((r) => typeof r.x1 !== "number")) {
    throw new Error(`${tracePath}: oscillation figure needs a regime trace with "x1" per record`);
  }
  const ks = records.map((r) => r.k);
  const ys = records.map((r) => r.y[0]);
  const x1s = records.map((r) => r.x1 as number);
  const x = linearScale([ks[0], ks[ks.length - 1]], plotRangeX);
  const y = linearScale(extent([...ys, ...x1s]), plotRangeY);
  return render({
    title: "Leader iterates under an oscillating follower response",
    xLabel: "iteration k",
    yLabel: "value",
    x,
    y,
    series: [
      { label: "y_k", color: "#c0392b", xs: ks, ys },
      { label: "x1_k", color: "#2980b9", xs: ks, ys: x1s },
    ],
  });
}

export function figRegimes(inexactPath: string, exactPath: string, oraclePath: string): string {
  const inexact = loadTrace(inexactPath);
  const exact = loadTrace(exactPath);
  const oracle = loadOracle(oraclePath);
  const yStar = oracle.y_star_phi[0];
  const kIn = inexact.map((r) => r.k);
  const kEx = exact.map((r) => r.k);
  const yIn = inexact.map((r) => r.y[0]);
  const yEx = exact.map((r) => r.y[0]);
  const kMax = Math.max(kIn[kIn.length - 1], kEx[kEx.length - 1]);
  const x = linearScale([Math.min(kIn[0], kEx[0]), kMax], plotRangeX);
  const y = linearScale(extent([...yIn, ...yEx, yStar]), plotRangeY);
  return render({
    title: "Inexact vs exact leader updates",
    xLabel: "iteration k",
    yLabel: "y_k",
    x,
    y,
    series: [
      { label: "inexact", color: "#8e44ad", xs: kIn, ys: yIn },
      { label: "exact", color: "#27ae60", xs: kEx, ys: yEx },
    ],
    hLines: [{ value: yStar, label: "y_star_phi", color: "#555555" }],
  });
}

export function figLogLog(summaryPath: string): string {
  const summary = loadSummary(summaryPath);
  const best: number[] = [];
  let cur = Infinity;
  for (const v of summary.j0) {
    cur = Math.min(cur, v);
    best.push(cur);
  }
  if (best.some((v) => v <= 0)) {
    throw new Error(`${summaryPath}: log-log plot needs positive objective values`);
  }
  // k starts at 0; shift by one so the log axis is defined
  const ks = summary.k.map((k) => k + 1);
  const x = logScale([ks[0], ks[ks.length - 1]], plotRangeX);
  const y = logScale([Math.min(...best) / 1.1, Math.max(...best) * 1.1], plotRangeY);
  return render({
    title: "Best-so-far leader objective",
    xLabel: "iteration k+1 (log)",
    yLabel: "best J0 (log)",
    x,
    y,
    series: [{ label: "best J0", color: "#d35400", xs: ks, ys: best }],
  });
}
