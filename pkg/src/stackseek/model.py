"""Follower games, feasible regions, selection functions and leader objectives.

Everything here is an immutable record around pure oracles: a game is its
pseudogradient F(x; y) plus a box-and-affine feasible region, a selection
function is a value/gradient pair with a strong-convexity modulus, and the
leader objective is a scalar oracle with optional smoothness metadata.
Monotonicity is declared by the builder and spot-checked by sampling, never
proven.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ConstructionFault, DimensionMismatch, EvaluationFault
from .rng import make_rng

MONOTONE = "monotone"
STRONGLY_MONOTONE = "strongly-monotone"
UNVERIFIED = "unverified"

# pass/fail threshold for the sampled monotonicity inner products
MONOTONICITY_SLACK = 1e-10
# relative slack for the strong-convexity lower bound
CONVEXITY_SLACK = 1e-8


@dataclass(frozen=True)
class Blocks:
    """Partition of the stacked follower vector into per-follower blocks."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError("block sizes must be positive")

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return tuple(out)

    def split(self, x: np.ndarray) -> list[np.ndarray]:
        off = self.offsets
        return [x[o : o + s] for o, s in zip(off, self.sizes)]


def _freeze(a) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(a, dtype=float))
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FeasibleRegion:
    """Box constraints per coordinate plus a shared affine system A x <= b.

    Equality rows are stored as paired inequalities (a, b) and (-a, -b).
    Construction verifies nonemptiness with a feasibility solve and caches
    one feasible point together with a spectral bound on A used by the
    projection kernels.
    """

    lo: np.ndarray
    hi: np.ndarray
    A: np.ndarray
    b: np.ndarray
    feasible_point: np.ndarray
    row_labels: tuple[str, ...] = ()
    spectral_sq: float = 0.0  # upper bound on ||A||_2^2

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    def contains(self, x: np.ndarray, tol: float = 1e-8) -> bool:
        if np.any(x < self.lo - tol) or np.any(x > self.hi + tol):
            return False
        if self.n_rows and np.any(self.A @ x - self.b > tol):
            return False
        return True


def make_region(lo, hi, A=None, b=None, equalities=None, row_labels=None,
                equality_labels=None) -> FeasibleRegion:
    """Build a FeasibleRegion, checking lo <= hi and nonemptiness.

    equalities: optional (C, d) pair appended as C x <= d and -C x <= -d.
    Raises ConstructionFault naming the most violated row when infeasible.
    """
    lo = _freeze(lo)
    hi = _freeze(hi)
    if lo.shape != hi.shape or lo.ndim != 1:
        raise DimensionMismatch("lo/hi must be 1-d vectors of equal length")
    if np.any(lo > hi):
        raise ConstructionFault("box is empty: lo > hi componentwise")
    n = lo.shape[0]

    rows, rhs, labels = [], [], []
    if A is not None:
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.atleast_1d(np.asarray(b, dtype=float))
        if A.shape != (b.shape[0], n):
            raise DimensionMismatch("A/b shapes inconsistent with box dimension")
        rows.append(A)
        rhs.append(b)
        labels += list(row_labels) if row_labels else [f"ineq[{i}]" for i in range(A.shape[0])]
    if equalities is not None:
        C, d = equalities
        C = np.atleast_2d(np.asarray(C, dtype=float))
        d = np.atleast_1d(np.asarray(d, dtype=float))
        if C.shape != (d.shape[0], n):
            raise DimensionMismatch("equality shapes inconsistent with box dimension")
        rows += [C, -C]
        rhs += [d, -d]
        eq_names = (list(equality_labels) if equality_labels
                    else [f"eq[{i}]" for i in range(C.shape[0])])
        labels += eq_names + eq_names

    if rows:
        A_full = np.vstack(rows)
        b_full = np.concatenate(rhs)
        # unit-norm rows keep the dual projection well conditioned and make
        # feasibility tolerances scale-free; zero rows are vacuous or infeasible
        norms = np.linalg.norm(A_full, axis=1)
        zero = norms == 0.0
        if np.any(zero):
            if np.any(b_full[zero] < 0):
                raise ConstructionFault("zero constraint row with negative bound")
            keep = ~zero
            A_full, b_full = A_full[keep], b_full[keep]
            labels = [l for l, k in zip(labels, keep) if k] if labels else labels
            norms = norms[keep]
        if A_full.shape[0]:
            A_full = A_full / norms[:, None]
            b_full = b_full / norms
    else:
        A_full = np.zeros((0, n))
        b_full = np.zeros(0)

    point, worst = _find_feasible(lo, hi, A_full, b_full)
    if point is None:
        name = labels[worst] if labels and worst is not None else f"row {worst}"
        raise ConstructionFault(f"region is infeasible; most violated constraint: {name}")

    spectral = _spectral_norm_sq(A_full) if A_full.shape[0] else 0.0
    return FeasibleRegion(
        lo=lo,
        hi=hi,
        A=_freeze(A_full),
        b=_freeze(b_full),
        feasible_point=_freeze(point),
        row_labels=tuple(labels),
        spectral_sq=float(spectral),
    )


def _find_feasible(lo, hi, A, b, tol=1e-7):
    """Feasibility certificate: min t s.t. A x - b <= t, lo <= x <= hi."""
    n = lo.shape[0]
    center = np.where(np.isfinite(lo) & np.isfinite(hi), (lo + hi) / 2.0, 0.0)
    if A.shape[0] == 0:
        return center, None
    if np.all(A @ center - b <= tol):
        return center, None
    from scipy.optimize import linprog

    # variables (x, t); minimize t
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_ub = np.hstack([A, -np.ones((A.shape[0], 1))])
    bounds = [(float(l), float(h)) for l, h in zip(lo, hi)] + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if not res.success:
        return None, None
    x, t = res.x[:-1], res.x[-1]
    if t > tol:
        return None, int(np.argmax(A @ x - b))
    return x, None


def _spectral_norm_sq(A, iters=60):
    """Deterministic power iteration on A^T A."""
    n = A.shape[1]
    v = np.full(n, 1.0 / np.sqrt(n))
    s = 0.0
    for _ in range(iters):
        w = A.T @ (A @ v)
        s = float(np.linalg.norm(w))
        if s == 0.0:
            return 0.0
        v = w / s
    return s * 1.0000001  # tiny inflation so 1/s steps stay safe


@dataclass(frozen=True)
class ParametricGame:
    """Follower game described by its pseudogradient oracle F(x; y).

    monotonicity is one of MONOTONE, STRONGLY_MONOTONE (with modulus sigma),
    or UNVERIFIED.  The declaration drives solver selection; it is trusted,
    with check_monotonicity shipped as the sampling guardrail.

    affine, when given, maps y to (Q, c) with F(x; y) = Q x + c and unlocks
    the fused solver kernels; cost_values optionally carries the per-follower
    J_i value oracles (x, y) -> float used by scenario-level objectives.
    """

    blocks: Blocks
    F: Callable[[np.ndarray, np.ndarray], np.ndarray]
    region: FeasibleRegion
    m: int
    monotonicity: str = UNVERIFIED
    sigma: float = 0.0
    jacobian: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    affine: Optional[Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]] = None
    cost_values: Optional[tuple[Callable, ...]] = None

    def __post_init__(self):
        if self.blocks.total != self.region.dim:
            raise DimensionMismatch("block sizes do not cover the region dimension")
        if self.monotonicity not in (MONOTONE, STRONGLY_MONOTONE, UNVERIFIED):
            raise ValueError(f"unknown monotonicity class {self.monotonicity!r}")
        if self.monotonicity == STRONGLY_MONOTONE and self.sigma <= 0:
            raise ValueError("strongly-monotone class requires sigma > 0")

    @property
    def n(self) -> int:
        return self.region.dim

    @property
    def n_followers(self) -> int:
        return len(self.blocks.sizes)

    def declared(self, monotonicity: str, sigma: float = 0.0) -> "ParametricGame":
        """Copy of the game with a different declared class."""
        return replace(self, monotonicity=monotonicity, sigma=sigma)


@dataclass(frozen=True)
class SelectionFunction:
    """Strongly convex selection criterion phi with gradient oracle.

    quadratic, when given, is (H, g0) with grad phi(x) = H x + g0; it keeps
    the regularized operator on the fused affine solver path.
    """

    value: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    mu: float
    quadratic: Optional[tuple[np.ndarray, np.ndarray]] = None

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("strong-convexity modulus mu must be positive")


@dataclass(frozen=True)
class LeaderObjective:
    """Leader cost oracle J0(y, x) with optional smoothness metadata."""

    value: Callable[[np.ndarray, np.ndarray], float]
    L1: Optional[float] = None
    L2: Optional[float] = None
    L_tilde: Optional[float] = None
    ell_tilde: Optional[float] = None
    J0_star: Optional[float] = None
    lam: Optional[float] = None
    y_ref: Optional[np.ndarray] = None

    def __call__(self, y, x) -> float:
        val = float(self.value(np.asarray(y, dtype=float), np.asarray(x, dtype=float)))
        if not np.isfinite(val):
            raise EvaluationFault("leader objective returned a non-finite value")
        return val


def eval_pseudogradient(game: ParametricGame, x, y) -> np.ndarray:
    """Evaluate F(x; y), rejecting bad dimensions and non-finite output."""
    x = np.asarray(x, dtype=float)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != (game.n,):
        raise DimensionMismatch(f"x has shape {x.shape}, expected ({game.n},)")
    if y.shape != (game.m,):
        raise DimensionMismatch(f"y has shape {y.shape}, expected ({game.m},)")
    out = np.asarray(game.F(x, y), dtype=float)
    if out.shape != (game.n,):
        raise EvaluationFault(f"F returned shape {out.shape}, expected ({game.n},)")
    if not np.all(np.isfinite(out)):
        raise EvaluationFault("pseudogradient oracle returned non-finite values")
    return out


def sample_feasible(region: FeasibleRegion, count: int, rng, span: float = 5.0,
                    tol: float = 1e-6) -> np.ndarray:
    """Draw points in the region: uniform in the (clipped) box, projected
    onto the affine rows when present."""
    rng = make_rng(rng)
    lo = np.where(np.isfinite(region.lo), region.lo, -span)
    hi = np.where(np.isfinite(region.hi), region.hi, span)
    pts = rng.uniform(lo, hi, size=(count, region.dim))
    if region.n_rows:
        from .engine.projection import project_polyhedron

        pts = np.stack([project_polyhedron(region, p, tol=tol).x for p in pts])
    return pts


@dataclass(frozen=True)
class MonotonicityReport:
    min_inner_product: float
    violating_pair: Optional[tuple[np.ndarray, np.ndarray]]
    passed: bool
    samples: int


def check_monotonicity(game: ParametricGame, y, sample_count: int = 1000, rng_seed=0,
                       sigma: Optional[float] = None) -> MonotonicityReport:
    """Spot-check <F(x)-F(x'), x-x'> >= sigma ||x-x'||^2 over sampled feasible pairs.

    sigma defaults to the game's declared modulus (0 for plain monotone).
    Pass/fail threshold is -1e-10 on the worst sampled inner product.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    if sigma is None:
        sigma = game.sigma if game.monotonicity == STRONGLY_MONOTONE else 0.0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    rng = make_rng(rng_seed)
    pts = sample_feasible(game.region, 2 * sample_count, rng)
    worst = np.inf
    worst_pair = None
    for i in range(sample_count):
        x1, x2 = pts[2 * i], pts[2 * i + 1]
        d = x1 - x2
        val = float((eval_pseudogradient(game, x1, y) - eval_pseudogradient(game, x2, y)) @ d)
        val -= sigma * float(d @ d)
        if val < worst:
            worst, worst_pair = val, (x1, x2)
    passed = worst >= -MONOTONICITY_SLACK
    return MonotonicityReport(worst, None if passed else worst_pair, passed, sample_count)


@dataclass(frozen=True)
class ConvexityReport:
    worst_slack: float
    violating_pair: Optional[tuple[np.ndarray, np.ndarray]]
    passed: bool
    samples: int


def check_strong_convexity(phi: SelectionFunction, mu_claim: float, sample_count: int = 200,
                           rng_seed=0, dim: Optional[int] = None,
                           box: tuple[float, float] = (-5.0, 5.0)) -> ConvexityReport:
    """Spot-check phi(z) >= phi(x) + grad(x)^T (z-x) + mu/2 ||z-x||^2 on sampled pairs."""
    if mu_claim <= 0:
        raise ValueError("mu_claim must be positive")
    if dim is None:
        if phi.quadratic is None:
            raise ValueError("dim is required when phi carries no quadratic structure")
        dim = phi.quadratic[0].shape[0]
    rng = make_rng(rng_seed)
    worst = np.inf
    worst_pair = None
    for _ in range(sample_count):
        x = rng.uniform(box[0], box[1], dim)
        z = rng.uniform(box[0], box[1], dim)
        fx, fz = float(phi.value(x)), float(phi.value(z))
        lower = fx + float(phi.grad(x) @ (z - x)) + 0.5 * mu_claim * float((z - x) @ (z - x))
        scale = max(1.0, abs(fx), abs(fz))
        slack = (fz - lower) / scale
        if slack < worst:
            worst, worst_pair = slack, (x, z)
    passed = worst >= -CONVEXITY_SLACK
    return ConvexityReport(worst, None if passed else worst_pair, passed, sample_count)


@dataclass(frozen=True)
class GradientCheckReport:
    max_rel_error: float
    passed: bool
    samples: int


def check_gradient(value: Callable[[np.ndarray], float], grad: Callable[[np.ndarray], np.ndarray],
                   dim: int, sample_count: int = 100, rng_seed=0, step: float = 1e-6,
                   rtol: float = 1e-5, box: tuple[float, float] = (-3.0, 3.0)) -> GradientCheckReport:
    """Compare an analytic gradient oracle against central finite differences."""
    rng = make_rng(rng_seed)
    worst = 0.0
    for _ in range(sample_count):
        x = rng.uniform(box[0], box[1], dim)
        g = np.asarray(grad(x), dtype=float)
        fd = np.empty(dim)
        for j in range(dim):
            e = np.zeros(dim)
            e[j] = step
            fd[j] = (float(value(x + e)) - float(value(x - e))) / (2 * step)
        err = np.linalg.norm(fd - g) / max(1.0, np.linalg.norm(g))
        worst = max(worst, float(err))
    return GradientCheckReport(worst, worst <= rtol, sample_count)
