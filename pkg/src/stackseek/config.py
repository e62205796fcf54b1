"""Experiment configuration: flat key = value text with dotted sections.

Example::

    scenario = testbed
    iters = 2000
    seed = 7
    schedule.eta_bar = 0.16
    inner.tol = 1e-6

JSON files (same keys, nested or dotted) are accepted as well.  Unknown
keys are rejected by name; see docs/config.md for the full schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .errors import ConfigError

SCENARIOS = ("illustrative", "testbed", "energy")
REGIMES = ("oscillating", "inexact", "exact")


def _as_bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("true", "1", "yes", "on"):
        return True
    if s in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _as_int(v):
    if isinstance(v, bool):
        raise ValueError("expected integer, got boolean")
    return int(str(v).strip())


def _as_float(v):
    return float(str(v).strip())


# key -> (parser, default); None default means "no entry unless given"
SCHEMA: dict[str, tuple] = {
    "scenario": (str, None),
    "regime": (str, None),
    "iters": (_as_int, 1000),
    "seed": (_as_int, 0),
    "replicates": (_as_int, 1),
    "out": (str, "runs"),
    "paper_sign": (_as_bool, False),
    "parallel_inner": (_as_bool, False),
    "schedule.eta_bar": (_as_float, 0.1),
    "schedule.delta_bar": (_as_float, 0.5),
    "schedule.beta_bar": (_as_float, 1.0),
    "schedule.alpha": (_as_float, 1.0),
    "inner.tol": (_as_float, 1e-6),
    "inner.max_iterations": (_as_int, 200_000),
    "regime.eta": (_as_float, 0.01),
    "regime.y0": (_as_float, None),
    "regime.x1_low": (_as_float, 0.5),
    "regime.x1_high": (_as_float, 1.5),
    "illustrative.epsilon": (_as_float, 0.1),
    "illustrative.y0": (_as_float, 0.0),
    "illustrative.phi_target": (_as_float, 1.0),
    "illustrative.phi_weight": (_as_float, 100.0),
    "illustrative.box": (_as_float, 50.0),
    "testbed.pairs": (_as_int, 1),
    "testbed.box": (_as_float, 10.0),
    "testbed.shift": (_as_float, 0.0),
    "testbed.y0": (_as_float, -1.0),
    "energy.nodes": (_as_int, 3),
    "energy.hours": (_as_int, 2),
    "energy.lam": (_as_float, 2.0),
    "energy.y0_offset": (_as_float, 1.0),
    "energy.trade_quad": (_as_float, 0.05),
    "energy.mg_slope": (_as_float, 0.25),
}


@dataclass
class ExperimentConfig:
    scenario: str
    regime: Optional[str]
    iters: int
    seed: int
    replicates: int
    out: str
    paper_sign: bool
    parallel_inner: bool
    values: dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]


def _flatten_json(obj, prefix="") -> dict[str, Any]:
    flat: dict[str, Any] = {}
    for key, val in obj.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            flat.update(_flatten_json(val, prefix=f"{name}."))
        else:
            flat[name] = val
    return flat


def _read_pairs(path: Path) -> dict[str, Any]:
    text = path.read_text(encoding="utf-8")
    stripped = text.lstrip()
    if path.suffix == ".json" or stripped.startswith("{"):
        try:
            return _flatten_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON: {e}") from e
    pairs: dict[str, Any] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in pairs:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        pairs[key] = val
    return pairs


def parse_config(path) -> ExperimentConfig:
    """Parse and validate an experiment config file.

    Raises ConfigError listing every offending field (unknown keys by name,
    bad values with the violated rule).
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    pairs = _read_pairs(path)

    errors: list[str] = []
    values: dict[str, Any] = {}
    for key, raw in pairs.items():
        if key not in SCHEMA:
            errors.append(f"unknown key: {key}")
            continue
        parser, _ = SCHEMA[key]
        try:
            values[key] = parser(raw)
        except (ValueError, TypeError) as e:
            errors.append(f"{key}: {e}")
    for key, (parser, default) in SCHEMA.items():
        if key not in values and default is not None:
            values[key] = default

    scenario = values.get("scenario")
    if scenario is None:
        errors.append("missing required field: scenario")
    elif scenario not in SCENARIOS:
        errors.append(f"scenario must be one of {SCENARIOS}, got {scenario!r}")

    regime = values.get("regime")
    if regime is not None and regime not in REGIMES:
        errors.append(f"regime must be one of {REGIMES}, got {regime!r}")
    if scenario == "illustrative" and regime is None:
        errors.append("illustrative scenario requires a regime")
    if regime is not None and scenario not in (None, "illustrative"):
        errors.append(f"regime applies only to the illustrative scenario, not {scenario!r}")

    if "iters" in values and values["iters"] < 1:
        errors.append("iters must be >= 1")
    if "replicates" in values and values["replicates"] < 1:
        errors.append("replicates must be >= 1")
    if "schedule.alpha" in values and values["schedule.alpha"] <= 0.5:
        errors.append("alpha must exceed 0.5")
    for key in ("schedule.eta_bar", "schedule.delta_bar", "schedule.beta_bar", "inner.tol"):
        if key in values and values[key] <= 0:
            errors.append(f"{key} must be positive")
    if "inner.max_iterations" in values and values["inner.max_iterations"] < 1:
        errors.append("inner.max_iterations must be >= 1")
    if "energy.nodes" in values and not (3 <= values["energy.nodes"] <= 5):
        errors.append("energy.nodes must be between 3 and 5 (desk-scale)")
    if "energy.hours" in values and values["energy.hours"] not in (2, 4):
        errors.append("energy.hours must be 2 or 4 (desk-scale)")

    if errors:
        raise ConfigError(f"{path}: " + "; ".join(errors))

    return ExperimentConfig(
        scenario=scenario,
        regime=regime,
        iters=values["iters"],
        seed=values["seed"],
        replicates=values["replicates"],
        out=values["out"],
        paper_sign=values["paper_sign"],
        parallel_inner=values["parallel_inner"],
        values=values,
    )
