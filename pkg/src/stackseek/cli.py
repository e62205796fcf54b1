"""Command-line front end.

    stackseek run <config> [--seed S] [--iters K] [--out DIR]
                           [--replicates R] [--paper-sign]
    stackseek check <config>      # assumption audits
    stackseek oracle <config>     # write reference values from the oracles
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import parse_config
from .errors import ConfigError, DomainFault, StackseekError
from .model import (UNVERIFIED, check_gradient, check_monotonicity,
                    check_strong_convexity)
from .rng import make_rng
from .runner import build_scenario, run_experiment, write_oracle_file


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="stackseek")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a config file")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--iters", type=int)
    p_run.add_argument("--out")
    p_run.add_argument("--replicates", type=int)
    p_run.add_argument("--paper-sign", action="store_true")

    p_check = sub.add_parser("check", help="audit scenario assumptions")
    p_check.add_argument("config")

    p_oracle = sub.add_parser("oracle", help="write oracle reference values")
    p_oracle.add_argument("config")
    p_oracle.add_argument("--out")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_oracle(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except StackseekError as e:
        print(f"fault: {e}", file=sys.stderr)
        return 3


def _load(args):
    cfg = parse_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if getattr(args, "iters", None) is not None:
        if args.iters < 1:
            raise ConfigError("iters must be >= 1")
        cfg.iters = args.iters
    if getattr(args, "out", None) is not None:
        cfg.out = args.out
    if getattr(args, "replicates", None) is not None:
        if args.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        cfg.replicates = args.replicates
    if getattr(args, "paper_sign", False):
        cfg.paper_sign = True
    return cfg


def _cmd_run(args) -> int:
    cfg = _load(args)
    metrics = run_experiment(cfg)
    for path in metrics.trace_paths:
        print(f"trace:   {path}")
    print(f"summary: {metrics.summary_path}")
    print(f"final J0: {metrics.final_j0:.6g}  best: {metrics.best_so_far[-1]:.6g}  "
          f"wall: {metrics.wall_clock:.2f}s")
    if metrics.stationarity is not None:
        print(f"stationarity profile: {metrics.stationarity:.6g}")
    if metrics.faults:
        for fault in metrics.faults:
            print(f"FAULT: {fault}", file=sys.stderr)
        return 1
    return 0


def _cmd_check(args) -> int:
    cfg = _load(args)
    scenario = build_scenario(cfg)
    problem = scenario.problem
    game, phi = problem.game, problem.phi
    failures = 0

    print(f"scenario: {cfg.scenario}  (n={game.n}, followers={game.n_followers}, "
          f"m={problem.m}, affine rows={game.region.n_rows})")
    print("feasibility: PASS (feasible point certified at construction)")

    rng = make_rng(cfg.seed)
    y_samples = [problem.y0] + [problem.y0 + rng.standard_normal(problem.m) * 0.25
                                for _ in range(4)]
    for i, y in enumerate(y_samples):
        declared = game.monotonicity
        try:
            rep = check_monotonicity(game, y, sample_count=200, rng_seed=cfg.seed + i)
        except DomainFault as e:
            print(f"monotonicity @ y={np.round(np.atleast_1d(y), 4)}: SKIP ({e})")
            continue
        if declared == UNVERIFIED:
            verdict = "INFO"
        elif rep.passed:
            verdict = "PASS"
        else:
            verdict = "FAIL"
            failures += 1
        print(f"monotonicity @ y={np.round(np.atleast_1d(y), 4)}: {verdict} "
              f"(declared {declared}, min inner product {rep.min_inner_product:.3e})")

    conv = check_strong_convexity(phi, phi.mu, sample_count=200, rng_seed=cfg.seed,
                                  dim=game.n)
    print(f"strong convexity (mu={phi.mu}): {'PASS' if conv.passed else 'FAIL'} "
          f"(worst slack {conv.worst_slack:.3e})")
    failures += 0 if conv.passed else 1

    gradcheck = check_gradient(phi.value, phi.grad, dim=game.n, sample_count=25,
                               rng_seed=cfg.seed)
    print(f"phi gradient vs finite differences: {'PASS' if gradcheck.passed else 'FAIL'} "
          f"(max rel err {gradcheck.max_rel_error:.3e})")
    failures += 0 if gradcheck.passed else 1

    return 1 if failures else 0


def _cmd_oracle(args) -> int:
    cfg = _load(args)
    path = write_oracle_file(cfg, out_dir=args.out)
    print(f"oracle: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
