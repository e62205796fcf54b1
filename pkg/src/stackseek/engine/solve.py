"""VI solvers, Tikhonov-regularized operators, and the vanishing-beta selection path.

solve_vi dispatches on the declared monotonicity class: extragradient for
monotone games, projected gradient for strongly monotone ones.  Both stop on
the unit-step natural residual and abort with ClassViolationFault when the
residual keeps growing, since a wrong declaration must fail loudly.

The regularized operator F + beta * grad(phi) is strongly monotone for any
beta > 0, so its VI has a unique solution x_beta(y); driving beta to zero
along a geometric path with warm starts yields the phi-optimal equilibrium
selection.  Warm starts are mandatory on the path: the regularized problem
gets increasingly ill-conditioned as beta vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from ..errors import ClassViolationFault, EvaluationFault
from ..model import (MONOTONE, STRONGLY_MONOTONE, ParametricGame,
                     SelectionFunction)
from . import kernels
from .projection import project_polyhedron

_INC_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class ViSolveParams:
    max_iterations: int = 100_000
    tol: float = 1e-8
    step: Optional[float] = None            # None: 0.9 / Lipschitz estimate
    warm_start: Optional[np.ndarray] = None
    divergence_window: int = 50
    max_step_halvings: int = 2
    projection_tol: Optional[float] = None  # None: tol * 1e-2 (projection noise stays well under tol)
    projection_max_iter: int = 50_000
    warm_lam: Optional[np.ndarray] = None   # dual warm start for the affine rows

    def proj_tol(self) -> float:
        if self.projection_tol is not None:
            return self.projection_tol
        return self.tol * 1e-2


@dataclass(frozen=True)
class ViSolveReport:
    x: np.ndarray
    residual: float
    iterations: int
    converged: bool
    status: str                 # 'converged' | 'budget'
    step: float
    halvings: int = 0
    lam: Optional[np.ndarray] = None


_PROBE_SEED = 0x5EED  # fixed stream so solves stay deterministic without an rng arg


def estimate_lipschitz(game: ParametricGame, y, x0, probes: int = 30) -> float:
    """Local Lipschitz estimate of F(.; y) by power iteration.

    Affine games use power iteration on Q^T Q, floored by the largest column
    norm (a lower bound on ||Q||_2) so a start vector degenerately aligned
    with the kernel cannot collapse the estimate.  Oracle-only games take
    Jacobian-vector products by central differences around x0.
    """
    from ..rng import make_rng

    y = np.atleast_1d(np.asarray(y, dtype=float))
    rng = make_rng(_PROBE_SEED)
    if game.affine is not None:
        Q, _ = game.affine(y)
        n = Q.shape[0]
        col_floor = float(np.max(np.linalg.norm(Q, axis=0))) if n else 0.0
        v = rng.standard_normal(n)
        v /= max(np.linalg.norm(v), 1e-300)
        s = 0.0
        for _ in range(probes):
            w = Q.T @ (Q @ v)
            s = float(np.linalg.norm(w))
            if s == 0.0:
                break
            v = w / s
        return max(np.sqrt(s) * 1.02, col_floor, 1e-12)
    x0 = np.asarray(x0, dtype=float)
    h = 1e-6 * (1.0 + float(np.linalg.norm(x0)))
    n = x0.shape[0]
    best = 0.0
    v = rng.standard_normal(n)
    v /= max(np.linalg.norm(v), 1e-300)
    for _ in range(probes):
        jv = (np.asarray(game.F(x0 + h * v, y), dtype=float)
              - np.asarray(game.F(x0 - h * v, y), dtype=float)) / (2.0 * h)
        s = float(np.linalg.norm(jv))
        best = max(best, s)
        if s == 0.0:
            v = rng.standard_normal(n)
            v /= max(np.linalg.norm(v), 1e-300)
            continue
        v = jv / s
    return max(best * 1.02, 1e-12)


def solve_vi(game: ParametricGame, y, params: ViSolveParams | None = None) -> ViSolveReport:
    """Solve VI(F(.; y), region) to the requested natural-residual tolerance.

    Requires a declared monotone or strongly-monotone class.  Budget
    exhaustion returns a non-converged report with the last iterate;
    persistent residual growth raises ClassViolationFault.
    """
    params = params or ViSolveParams()
    if game.monotonicity not in (MONOTONE, STRONGLY_MONOTONE):
        raise ValueError(
            "solve_vi requires a declared monotone or strongly-monotone game; "
            f"got {game.monotonicity!r} (run check_monotonicity and declare a class)")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    region = game.region
    x0 = np.ascontiguousarray(
        region.feasible_point if params.warm_start is None else params.warm_start,
        dtype=float)
    use_pgd = game.monotonicity == STRONGLY_MONOTONE
    if params.step is not None:
        tau = params.step
    else:
        L = estimate_lipschitz(game, y, x0)
        tau = 0.9 / L
        if use_pgd:
            # projected gradient needs tau < 2 sigma / L^2 to contract for
            # nonsymmetric operators; 0.9/L is kept when already safe
            tau = min(tau, game.sigma / (L * L))

    if game.affine is not None:
        Q, c = game.affine(y)
        Q = np.ascontiguousarray(Q, dtype=float)
        c = np.ascontiguousarray(c, dtype=float)
        if params.warm_lam is not None and params.warm_lam.shape == (region.n_rows,):
            lam0 = np.ascontiguousarray(params.warm_lam, dtype=float)
        else:
            lam0 = np.zeros(region.n_rows)
        proj_step = 1.0 / region.spectral_sq if region.n_rows else 0.0
        x, res, iters, status, lam, halvings = kernels.solve_affine(
            Q, c, region.lo, region.hi, region.A, region.b, x0, lam0,
            tau, params.tol, params.max_iterations,
            params.divergence_window, params.max_step_halvings,
            proj_step, params.proj_tol(), params.projection_max_iter, use_pgd)
        x = np.asarray(x)
    else:
        x, res, iters, status, lam, halvings = _solve_generic(
            game, y, x0, tau, params, use_pgd)

    if status == 2:
        raise ClassViolationFault(
            f"natural residual grew for {params.divergence_window} consecutive "
            f"iterations (last {res:.3e}) despite {halvings} step halvings: the "
            f"declared {game.monotonicity!r} class looks violated at this y")
    if status == 3:
        raise EvaluationFault("pseudogradient returned non-finite values during solve")
    return ViSolveReport(x=x, residual=float(res), iterations=int(iters),
                         converged=(status == 0), status="converged" if status == 0 else "budget",
                         step=float(tau), halvings=int(halvings),
                         lam=np.asarray(lam) if lam is not None else None)


def _solve_generic(game, y, x0, tau, params, use_pgd):
    """Python loop for oracle-only games; projections go through the kernels."""
    region = game.region
    proj_tol = params.proj_tol()

    if params.warm_lam is not None and params.warm_lam.shape == (region.n_rows,):
        lam = np.asarray(params.warm_lam, dtype=float)
    else:
        lam = np.zeros(region.n_rows)

    def project(z):
        nonlocal lam
        r = project_polyhedron(region, z, tol=proj_tol, lam0=lam,
                               max_iter=params.projection_max_iter)
        lam = r.lam
        return r.x

    F = lambda x: np.asarray(game.F(x, y), dtype=float)
    x = x0.copy()
    prev_res = np.inf
    inc_count = 0
    halvings = 0
    status = 1
    res = np.inf
    it = 0
    for it in range(1, params.max_iterations + 1):
        fx = F(x)
        if not np.all(np.isfinite(fx)):
            status = 3
            break
        res = float(np.linalg.norm(x - project(x - fx)))
        if res <= params.tol:
            status = 0
            break
        if res > prev_res * _INC_SLACK:
            inc_count += 1
        else:
            inc_count = 0
        prev_res = res
        if inc_count >= params.divergence_window:
            if halvings < params.max_step_halvings:
                tau *= 0.5
                halvings += 1
                inc_count = 0
            else:
                status = 2
                break
        if use_pgd:
            x = project(x - tau * fx)
        else:
            xh = project(x - tau * fx)
            fh = F(xh)
            if not np.all(np.isfinite(fh)):
                status = 3
                break
            x = project(x - tau * fh)
    if status == 1:
        res = float(np.linalg.norm(x - project(x - F(x))))
        if res <= params.tol:
            status = 0
    return x, res, it, status, lam, halvings


def regularized_operator(game: ParametricGame, phi: SelectionFunction, beta: float) -> Callable:
    """Oracle x, y -> F(x; y) + beta * grad(phi)(x); beta=0 returns F itself."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    if beta == 0.0:
        return game.F

    def F_beta(x, y):
        return np.asarray(game.F(x, y), dtype=float) + beta * np.asarray(phi.grad(x), dtype=float)

    return F_beta


def regularized_game(game: ParametricGame, phi: SelectionFunction, beta: float) -> ParametricGame:
    """Game with the Tikhonov-regularized pseudogradient.

    The monotone class is kept for solver selection (extragradient handles
    the vanishing-beta regime with a beta-independent step, where projected
    gradient would need ever smaller steps); strongly monotone games keep
    their class with the modulus raised by beta * mu.
    """
    F_beta = regularized_operator(game, phi, beta)
    affine = None
    if game.affine is not None and phi.quadratic is not None:
        H, g0 = phi.quadratic
        base = game.affine

        def affine(y, _H=H, _g0=g0, _b=beta):
            Q, c = base(y)
            return Q + _b * _H, c + _b * _g0

    sigma = game.sigma + beta * phi.mu if game.monotonicity == STRONGLY_MONOTONE else 0.0
    return replace(game, F=F_beta, affine=affine, sigma=sigma)


def solve_regularized(game: ParametricGame, phi: SelectionFunction, beta: float, y,
                      params: ViSolveParams | None = None) -> ViSolveReport:
    """Solve the regularized VI; its solution x_beta(y) is unique for beta > 0."""
    if beta <= 0:
        raise ValueError("solve_regularized requires beta > 0")
    return solve_vi(regularized_game(game, phi, beta), y, params)


@dataclass(frozen=True)
class TikhonovPathParams:
    beta0: float = 1.0
    decay: float = 0.5
    path_tol: float = 1e-6
    tol_base: float = 1e-8       # stage residual tolerance cap
    tol_scale: float = 1e-2      # stage tolerance is min(tol_base, tol_scale * beta^2)
    tol_floor: float = 1e-13
    max_stages: int = 80

    def __post_init__(self):
        if self.beta0 <= 0 or not (0.0 < self.decay < 1.0) or self.path_tol <= 0:
            raise ValueError("need beta0 > 0, decay in (0,1), path_tol > 0")

    def stage_tol(self, beta: float) -> float:
        # solver noise must be o(beta) for the beta/mu error bound to show
        return max(min(self.tol_base, self.tol_scale * beta * beta), self.tol_floor)


@dataclass(frozen=True)
class SelectionReport:
    x: np.ndarray
    converged: bool
    beta_reached: float
    last_gap: float
    gaps: tuple[float, ...]
    stage_reports: tuple[ViSolveReport, ...]


def optimal_selection(game: ParametricGame, phi: SelectionFunction, y,
                      path: TikhonovPathParams | None = None,
                      inner: ViSolveParams | None = None) -> SelectionReport:
    """Follow x_beta(y) along beta_j = beta0 * decay^j until the stage gap
    drops below path_tol; the last iterate approximates the phi-optimal
    selection x*_phi(y)."""
    path = path or TikhonovPathParams()
    inner = inner or ViSolveParams()
    beta = path.beta0
    x = game.region.feasible_point if inner.warm_start is None else np.asarray(inner.warm_start, dtype=float)
    gaps: list[float] = []
    reports: list[ViSolveReport] = []
    prev: np.ndarray | None = None
    for j in range(path.max_stages):
        stage = replace(inner, tol=path.stage_tol(beta), warm_start=x)
        rep = solve_regularized(game, phi, beta, y, stage)
        reports.append(rep)
        if not rep.converged:
            return SelectionReport(rep.x, False, beta,
                                   gaps[-1] if gaps else np.inf,
                                   tuple(gaps), tuple(reports))
        if prev is not None:
            gap = float(np.linalg.norm(rep.x - prev))
            gaps.append(gap)
            if gap <= path.path_tol:
                return SelectionReport(rep.x, True, beta, gap, tuple(gaps), tuple(reports))
        prev = rep.x
        x = rep.x
        beta *= path.decay
    return SelectionReport(x, False, beta / path.decay,
                           gaps[-1] if gaps else np.inf, tuple(gaps), tuple(reports))
