"""Compare the compiled kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--iters N]

Times the polyhedral projection and the fused affine solve on the
desk-scale energy region (the hot path of the whole artifact), plus a
short end-to-end seek, for both backends.
"""

import argparse
import time

import numpy as np

from stackseek.engine import kernels_py
from stackseek.engine.solve import regularized_game
from stackseek.scenarios import build_energy_community

try:
    from stackseek import _core
except ImportError:
    _core = None


def time_fn(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    sc = build_energy_community()
    game = sc.problem.game
    region = game.region
    reg = regularized_game(game, sc.problem.phi, beta=0.5)
    y = sc.problem.y0
    Q, c = reg.affine(y)
    Q = np.ascontiguousarray(Q)
    c = np.ascontiguousarray(c)

    rng = np.random.Generator(np.random.Philox(key=42))
    z_batch = [region.feasible_point + rng.standard_normal(game.n) for _ in range(50)]
    step = 1.0 / region.spectral_sq
    x0 = region.feasible_point

    backends = [("python", kernels_py)]
    if _core is not None:
        backends.append(("compiled", _core))

    results = {}
    for name, impl in backends:
        def run_proj(impl=impl):
            lam = np.zeros(region.n_rows)
            for z in z_batch:
                _, lam, _, _ = impl.dual_project(
                    np.ascontiguousarray(z), region.lo, region.hi, region.A,
                    region.b, lam, step, 1e-8, 1e-8, 50_000)

        def run_solve(impl=impl):
            impl.solve_affine(Q, c, region.lo, region.hi, region.A, region.b,
                              np.ascontiguousarray(x0), np.zeros(region.n_rows),
                              0.3, 1e-6, 200_000, 50, 2, step, 1e-8, 50_000, False)

        results[name] = {
            "projection x50": time_fn(run_proj, args.repeats),
            "regularized solve": time_fn(run_solve, args.repeats),
        }

    print(f"{'kernel':<22}{'python':>12}", end="")
    if "compiled" in results:
        print(f"{'compiled':>12}{'speedup':>10}")
    else:
        print("   (compiled core not built)")
    for key in ("projection x50", "regularized solve"):
        py = results["python"][key]
        line = f"{key:<22}{py * 1e3:>10.2f}ms"
        if "compiled" in results:
            cc = results["compiled"][key]
            line += f"{cc * 1e3:>10.2f}ms{py / cc:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
