// Readers for the experiment CLI's file formats: trace JSONL (one record
// per iteration), summary CSV (header row), and the oracle JSON.

import { readFileSync } from "node:fs";

export interface TraceRecord {
  k: number;
  y: number[];
  x1?: number;
  j0?: number;
}

export function loadTrace(path: string): TraceRecord[] {
  const text = readFileSync(path, "utf-8");
  const records: TraceRecord[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let row: any;
    try {
      row = JSON.parse(line);
    } catch (e) {
      throw new Error(`${path}:${i + 1}: malformed trace line: ${(e as Error).message}`);
    }
    if (row.fault !== undefined) continue; // trailing fault marker
    if (typeof row.k !== "number" || !Array.isArray(row.y)) {
      throw new Error(`${path}:${i + 1}: trace record needs numeric "k" and array "y"`);
    }
    records.push(row as TraceRecord);
  }
  if (records.length === 0) {
    throw new Error(`${path}: empty trace`);
  }
  for (let i = 1; i < records.length; i++) {
    if (records[i].k <= records[i - 1].k) {
      throw new Error(`${path}: iteration index must be strictly increasing at row ${i}`);
    }
  }
  return records;
}

export interface Summary {
  k: number[];
  j0: number[];
}

export function loadSummary(path: string): Summary {
  const text = readFileSync(path, "utf-8");
  const lines = text.split("\n").filter((l) => l.trim().length > 0);
  if (lines.length === 0) throw new Error(`${path}: empty summary`);
  const header = lines[0].split(",");
  const kCol = header.indexOf("k");
  const jCol = header.indexOf("j0");
  if (kCol < 0 || jCol < 0) {
    throw new Error(`${path}: summary header must contain "k" and "j0", got "${lines[0]}"`);
  }
  if (lines.length === 1) throw new Error(`${path}: summary has a header but no rows`);
  const k: number[] = [];
  const j0: number[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    const kv = Number(cells[kCol]);
    const jv = Number(cells[jCol]);
    if (!Number.isFinite(kv) || !Number.isFinite(jv)) {
      throw new Error(`${path}:${i + 1}: non-numeric k/j0 cell`);
    }
    k.push(kv);
    j0.push(jv);
  }
  return { k, j0 };
}

export interface Oracle {
  y_star_phi: number[];
}

export function loadOracle(path: string): Oracle {
  let payload: any;
  try {
    payload = JSON.parse(readFileSync(path, "utf-8"));
  } catch (e) {
    throw new Error(`${path}: malformed oracle file: ${(e as Error).message}`);
  }
  if (!Array.isArray(payload.y_star_phi) || payload.y_star_phi.length === 0) {
    throw new Error(`${path}: oracle file carries no y_star_phi reference`);
  }
  return payload as Oracle;
}
