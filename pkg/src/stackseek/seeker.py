"""Zeroth-order induced-equilibrium seeking.

One iteration: sample a unit direction v_k, probe the followers at y_k and
at y_k + delta_k v_k through the beta_k-regularized lower-level solve, form
the two-point gradient estimate, and take a descent step on y.  The
schedules eta_k, delta_k, beta_k decay so that the regularization bias
stays subordinate to the step sizes (alpha > 1/2).

Sign convention: the estimator used here is
    g_hat = (m / delta) * (J0(y_hat, x_hat) - J0(y, x)) * v,
whose expectation is the smoothed gradient, so y_{k+1} = y_k - eta_k g_hat
descends.  paper_sign=True flips the difference to the base-minus-perturbed
variant some formulations use (which ascends under the same update); the
flip is logged in the trace metadata, not hidden.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .engine.solve import ViSolveParams, ViSolveReport, solve_regularized
from .errors import EvaluationFault
from .model import LeaderObjective, ParametricGame, SelectionFunction
from .rng import make_rng


@dataclass(frozen=True)
class ScheduleParams:
    """Base constants for the decaying step/perturbation/regularization sequences."""

    eta_bar: float
    delta_bar: float
    beta_bar: float
    alpha: float
    m: int

    def __post_init__(self):
        # eta_bar = 0 is allowed: a probing-only loop that never moves y
        if self.eta_bar < 0 or min(self.delta_bar, self.beta_bar) <= 0:
            raise ValueError("need eta_bar >= 0 and delta_bar, beta_bar > 0")
        if self.alpha <= 0.5:
            raise ValueError("alpha must exceed 0.5")
        if self.m < 1:
            raise ValueError("leader dimension m must be >= 1")


def schedule(k: int, params: ScheduleParams) -> tuple[float, float, float]:
    """(eta_k, delta_k, beta_k) for iteration k >= 0."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    m = params.m
    eta = params.eta_bar * (k + 1) ** -0.5 / m
    delta = params.delta_bar * (k + 1) ** -0.25 / np.sqrt(m)
    beta = params.beta_bar * (k + 1) ** -float(params.alpha)
    return float(eta), float(delta), float(beta)


def sample_sphere(m: int, rng) -> np.ndarray:
    """Uniform draw from the unit sphere in R^m (normalized Gaussian)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = make_rng(rng)
    while True:
        v = rng.standard_normal(m)
        norm = float(np.linalg.norm(v))
        if norm > 0.0:  # probability-zero guard
            return v / norm


def estimate_gradient(j0: LeaderObjective | Callable, y, y_hat, x, x_hat,
                      delta: float, m: int, v, paper_sign: bool = False) -> np.ndarray:
    """Two-point estimate (m/delta) (J0(y_hat, x_hat) - J0(y, x)) v."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    v = np.asarray(v, dtype=float)
    nv = float(np.linalg.norm(v))
    if abs(nv - 1.0) > 1e-9:
        raise ValueError("v must be a unit vector")
    value = j0.value if isinstance(j0, LeaderObjective) else j0
    f_base = float(value(np.asarray(y, dtype=float), np.asarray(x, dtype=float)))
    f_pert = float(value(np.asarray(y_hat, dtype=float), np.asarray(x_hat, dtype=float)))
    if not (np.isfinite(f_base) and np.isfinite(f_pert)):
        raise EvaluationFault("leader objective returned non-finite values")
    diff = (f_base - f_pert) if paper_sign else (f_pert - f_base)
    return (m / delta) * diff * v


@dataclass(frozen=True)
class SeekProblem:
    game: ParametricGame
    phi: SelectionFunction
    j0: LeaderObjective
    m: int
    y0: np.ndarray

    def __post_init__(self):
        y0 = np.atleast_1d(np.asarray(self.y0, dtype=float))
        object.__setattr__(self, "y0", y0)
        if y0.shape != (self.m,):
            raise ValueError(f"y0 has shape {y0.shape}, expected ({self.m},)")
        if self.game.m != self.m:
            raise ValueError("game leader dimension disagrees with problem m")


@dataclass(frozen=True)
class TraceRecord:
    k: int
    y: np.ndarray
    v: np.ndarray
    y_hat: np.ndarray
    x: np.ndarray
    x_hat: np.ndarray
    eta: float
    delta: float
    beta: float
    j0: float
    j0_hat: float
    g_hat: np.ndarray
    report: Optional[ViSolveReport] = None
    report_hat: Optional[ViSolveReport] = None

    @property
    def residuals(self) -> tuple[float, float]:
        return (self.report.residual if self.report else np.nan,
                self.report_hat.residual if self.report_hat else np.nan)


@dataclass
class Trace:
    records: list[TraceRecord] = field(default_factory=list)
    fault: Optional[str] = None
    meta: dict = field(default_factory=dict)
    problem: Optional[SeekProblem] = None

    def __len__(self):
        return len(self.records)

    @property
    def y_final(self) -> np.ndarray:
        return self.records[-1].y if self.records else None


def seek(problem: SeekProblem, params: ScheduleParams, K: int, rng,
         inner: ViSolveParams | None = None, paper_sign: bool = False,
         parallel_inner: bool = False) -> Trace:
    """Run K iterations of the zeroth-order seeking loop.

    Deterministic given (rng seed, params): the only randomness is the
    per-iteration sphere draw from the Philox stream.  Inner solves for
    x_{beta_k}(y_k) and x_{beta_k}(y_hat_k) are warm-started from their own
    previous solutions, so they are independent and may run concurrently;
    results do not depend on parallel_inner.  An inner solve that exhausts
    its budget records a fault and halts with the partial trace.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if params.m != problem.m:
        raise ValueError("schedule m disagrees with problem m")
    ell = problem.j0.ell_tilde
    if ell is not None and params.eta_bar > problem.m / (2.0 * ell):
        raise ValueError(
            f"eta_bar={params.eta_bar} exceeds m/(2*ell_tilde)={problem.m / (2 * ell):.6g}")
    inner = inner or ViSolveParams()
    rng = make_rng(rng)
    trace = Trace(meta={"K": K, "paper_sign": paper_sign,
                        "schedule": params, "rng": "philox"},
                  problem=problem)
    y = problem.y0.copy()
    warm = problem.game.region.feasible_point
    warm_hat = warm
    warm_lam = None
    warm_lam_hat = None
    pool = ThreadPoolExecutor(max_workers=2) if parallel_inner else None
    try:
        for k in range(K):
            eta, delta, beta = schedule(k, params)
            v = sample_sphere(problem.m, rng)
            y_hat = y + delta * v

            def solve_at(point, start, lam):
                return solve_regularized(problem.game, problem.phi, beta, point,
                                         replace(inner, warm_start=start, warm_lam=lam))

            if pool is not None:
                fut = pool.submit(solve_at, y, warm, warm_lam)
                fut_hat = pool.submit(solve_at, y_hat, warm_hat, warm_lam_hat)
                rep, rep_hat = fut.result(), fut_hat.result()
            else:
                rep = solve_at(y, warm, warm_lam)
                rep_hat = solve_at(y_hat, warm_hat, warm_lam_hat)

            record_partial = not (rep.converged and rep_hat.converged)
            x, x_hat = rep.x, rep_hat.x
            j0_val = problem.j0(y, x)
            j0_hat = problem.j0(y_hat, x_hat)
            g_hat = estimate_gradient(problem.j0, y, y_hat, x, x_hat, delta,
                                      problem.m, v, paper_sign=paper_sign)
            trace.records.append(TraceRecord(
                k=k, y=y.copy(), v=v, y_hat=y_hat, x=x, x_hat=x_hat,
                eta=eta, delta=delta, beta=beta, j0=j0_val, j0_hat=j0_hat,
                g_hat=g_hat, report=rep, report_hat=rep_hat))
            if record_partial:
                trace.fault = (f"inner solve did not converge at k={k} "
                               f"(residuals {rep.residual:.3e}, {rep_hat.residual:.3e})")
                return trace
            warm, warm_hat = x, x_hat
            warm_lam, warm_lam_hat = rep.lam, rep_hat.lam
            y = y - eta * g_hat
    finally:
        if pool is not None:
            pool.shutdown(wait=False)
    return trace


def stationarity_profile(trace: Trace, selection_oracle: Callable[[np.ndarray], np.ndarray],
                         fd_step: float | None = None) -> float:
    """Eta-weighted average of ||grad_fd J0(y_k, x*_phi(y_k))||^2 over the trace.

    selection_oracle maps y to the phi-optimal follower profile (analytic
    map or an optimal_selection wrapper); the gradient of the induced
    objective is taken by central differences with step fd_step, defaulting
    to 1e-4 * (1 + ||y||) per record.
    """
    if not trace.records:
        raise ValueError("empty trace")
    if trace.problem is None:
        raise ValueError("trace carries no problem reference")
    j0 = trace.problem.j0
    m = trace.problem.m

    def induced(yv):
        return j0(yv, selection_oracle(yv))

    num = 0.0
    den = 0.0
    for rec in trace.records:
        yk = rec.y
        h = fd_step if fd_step is not None else 1e-4 * (1.0 + float(np.linalg.norm(yk)))
        g = np.empty(m)
        for i in range(m):
            e = np.zeros(m)
            e[i] = h
            g[i] = (induced(yk + e) - induced(yk - e)) / (2.0 * h)
        num += rec.eta * float(g @ g)
        den += rec.eta
    return num / den
