"""Trace and summary file formats.

Traces are JSONL: one record per iteration, floats serialized with 17
significant digits so values round-trip exactly.  Summaries are CSV with
a header row, comma separators, UTF-8 and LF line endings.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .scenarios.illustrative import RegimeTrace
from .seeker import Trace


def _f(x: float) -> float:
    # round-trip via 17 significant digits; keeps json output compact-ish
    return float(f"{float(x):.17g}")


def _vec(v) -> list[float]:
    return [_f(t) for t in np.atleast_1d(np.asarray(v, dtype=float))]


def write_trace_jsonl(trace: Trace, path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in trace.records:
            row = {
                "k": r.k,
                "y": _vec(r.y),
                "v": _vec(r.v),
                "y_hat": _vec(r.y_hat),
                "x": _vec(r.x),
                "x_hat": _vec(r.x_hat),
                "eta": _f(r.eta),
                "delta": _f(r.delta),
                "beta": _f(r.beta),
                "j0": _f(r.j0),
                "j0_hat": _f(r.j0_hat),
                "g_hat": _vec(r.g_hat),
                "residual": _f(r.report.residual) if r.report else None,
                "residual_hat": _f(r.report_hat.residual) if r.report_hat else None,
                "inner_iterations": r.report.iterations if r.report else None,
                "inner_iterations_hat": r.report_hat.iterations if r.report_hat else None,
                "converged": bool(r.report.converged and r.report_hat.converged)
                if (r.report and r.report_hat) else None,
            }
            fh.write(json.dumps(row) + "\n")
        if trace.fault:
            fh.write(json.dumps({"fault": trace.fault}) + "\n")
    return path


def write_regime_trace_jsonl(trace: RegimeTrace, path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for r in trace.records:
            row = {
                "k": r.k,
                "y": [_f(r.y)],
                "x1": _f(r.x1),
                "x": _vec(r.x),
                "grad": _f(r.grad),
                "j0": _f(r.j0),
            }
            fh.write(json.dumps(row) + "\n")
        if trace.fault:
            fh.write(json.dumps({"fault": trace.fault}) + "\n")
    return path


SUMMARY_HEADER = ["k", "j0", "beta", "eta", "delta", "g_hat_norm",
                  "residual", "residual_hat"]


def summary_rows_from_trace(trace: Trace) -> list[list[float]]:
    rows = []
    for r in trace.records:
        res, res_hat = r.residuals
        rows.append([r.k, r.j0, r.beta, r.eta, r.delta,
                     float(np.linalg.norm(r.g_hat)), res, res_hat])
    return rows


def summary_rows_from_regime(trace: RegimeTrace) -> list[list[float]]:
    nan = float("nan")
    return [[r.k, r.j0, nan, nan, nan, abs(r.grad), nan, nan] for r in trace.records]


def write_summary_csv(rows, path) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(SUMMARY_HEADER) + "\n")
        for row in rows:
            cells = [str(int(row[0]))] + [f"{float(v):.17g}" for v in row[1:]]
            fh.write(",".join(cells) + "\n")
    return path


def aggregate_summary(rows_per_replicate: list[list[list[float]]]) -> list[list[float]]:
    """Mean across replicates, elementwise per iteration row."""
    if len(rows_per_replicate) == 1:
        return rows_per_replicate[0]
    counts = {len(rows) for rows in rows_per_replicate}
    K = min(counts)
    out = []
    for k in range(K):
        stacked = np.array([rows[k] for rows in rows_per_replicate], dtype=float)
        mean = stacked.mean(axis=0)
        mean[0] = stacked[0, 0]  # k column stays the iteration index
        out.append(list(mean))
    return out


def load_trace_jsonl(path) -> list[dict]:
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


def load_summary_csv(path) -> dict[str, np.ndarray]:
    with Path(path).open("r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        data = [[float(c) for c in line.strip().split(",")] for line in fh if line.strip()]
    arr = np.array(data) if data else np.zeros((0, len(header)))
    return {name: arr[:, i] for i, name in enumerate(header)}
