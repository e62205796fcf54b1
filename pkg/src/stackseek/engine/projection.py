"""Euclidean projections onto box-plus-affine regions and the VI residual."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import FeasibleRegion
from . import kernels

DEFAULT_PROJ_TOL = 1e-10
DEFAULT_PROJ_MAX_ITER = 50_000


def project_box(z, lo, hi) -> np.ndarray:
    """Componentwise clamp: the Euclidean projection onto a box."""
    return np.clip(np.asarray(z, dtype=float), lo, hi)


@dataclass(frozen=True)
class ProjectionResult:
    x: np.ndarray
    lam: np.ndarray
    iterations: int
    converged: bool


def project_polyhedron(region: FeasibleRegion, z, tol: float = DEFAULT_PROJ_TOL,
                       lam0: np.ndarray | None = None,
                       max_iter: int = DEFAULT_PROJ_MAX_ITER) -> ProjectionResult:
    """Project z onto the region by dual ascent on the affine rows.

    The stopping rule is a surrogate for distance-to-projection: affine
    violation <= tol together with an infinity-norm primal step <= tol.
    A non-converged result is returned (not raised) when the iteration
    budget runs out.
    """
    z = np.ascontiguousarray(z, dtype=float)
    if region.n_rows == 0:
        return ProjectionResult(project_box(z, region.lo, region.hi),
                                np.zeros(0), 0, True)
    lam = np.zeros(region.n_rows) if lam0 is None else np.ascontiguousarray(lam0, dtype=float)
    step = 1.0 / region.spectral_sq
    x, lam, iters, ok = kernels.dual_project(z, region.lo, region.hi, region.A,
                                             region.b, lam, step, tol, tol, max_iter)
    return ProjectionResult(np.asarray(x), np.asarray(lam), iters, bool(ok))


def natural_residual(F_oracle, region: FeasibleRegion, x,
                     projection_tol: float = DEFAULT_PROJ_TOL) -> float:
    """|| x - Pi_region(x - F(x)) ||, the computable VI stationarity measure."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("natural_residual requires a finite point")
    fx = np.asarray(F_oracle(x), dtype=float)
    proj = project_polyhedron(region, x - fx, tol=projection_tol)
    return float(np.linalg.norm(x - proj.x))
