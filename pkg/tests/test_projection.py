"""Projection kernels against analytic and dense-grid oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackseek import make_region, natural_residual, project_box, project_polyhedron
from stackseek.engine import kernels, kernels_py


# ------------------------------------------------------------- project_box

def test_project_box_clamps():
    assert np.array_equal(project_box([3.0, -3.0], [-1, -1], [1, 1]), [1.0, -1.0])


def test_project_box_identity_inside():
    z = np.array([0.3, -0.7])
    assert np.array_equal(project_box(z, [-1, -1], [1, 1]), z)


def test_project_box_partial_clamp():
    assert np.array_equal(project_box([0.5, 2.0], [0, 0], [1, 1]), [0.5, 1.0])


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=5))
@settings(max_examples=100, deadline=None)
def test_project_box_properties(values):
    z = np.asarray(values)
    lo, hi = np.full(z.size, -2.0), np.full(z.size, 3.0)
    p = project_box(z, lo, hi)
    assert np.all(p >= lo) and np.all(p <= hi)
    # idempotent and componentwise optimal for a separable objective
    assert np.array_equal(project_box(p, lo, hi), p)
    assert np.all(np.abs(p - z) <= np.maximum(np.abs(lo - z), np.abs(hi - z)) + 1e-15)


# ------------------------------------------------------ project_polyhedron

def grid_nearest_feasible(region, z, span=3.0, resolution=0.01):
    """Dense-grid oracle: nearest grid point satisfying all constraints."""
    lo = np.maximum(region.lo, z - span)
    hi = np.minimum(region.hi, z + span)
    axes = [np.arange(l, h + resolution / 2, resolution) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    if region.n_rows:
        mask = np.all(grid @ region.A.T - region.b <= 1e-9, axis=1)
        grid = grid[mask]
    d = np.linalg.norm(grid - z, axis=1)
    return grid[int(np.argmin(d))]


def test_halfspace_projection_analytic():
    """z=(2,2) onto {x1 + x2 <= 2}: analytic z - ((a z - b)/||a||^2) a = (1, 1)."""
    region = make_region(lo=[-10, -10], hi=[10, 10], A=[[1, 1]], b=[2])
    a, b = np.array([1.0, 1.0]), 2.0
    z = np.array([2.0, 2.0])
    oracle = z - ((a @ z - b) / (a @ a)) * a
    assert np.allclose(oracle, [1.0, 1.0])
    res = project_polyhedron(region, z, tol=1e-10)
    assert res.converged
    assert np.allclose(res.x, oracle, atol=1e-8)


def test_projection_identity_on_feasible():
    region = make_region(lo=[-10, -10], hi=[10, 10], A=[[1, 1]], b=[2])
    z = np.array([0.25, -1.5])
    res = project_polyhedron(region, z, tol=1e-10)
    assert np.allclose(res.x, z, atol=1e-9)


def test_projection_onto_line_derived():
    """z=(3,0) onto {x1 - x2 = 1} in [-10,10]^2: analytic projection (2,1),
    cross-checked against the dense-grid oracle."""
    region = make_region(lo=[-10, -10], hi=[10, 10],
                         equalities=([[1.0, -1.0]], [1.0]))
    z = np.array([3.0, 0.0])
    # analytic: project onto the line x1 - x2 = 1
    a = np.array([1.0, -1.0])
    analytic = z - ((a @ z - 1.0) / (a @ a)) * a
    assert np.allclose(analytic, [2.0, 1.0])
    grid = grid_nearest_feasible(region, z, span=2.0, resolution=0.005)
    assert np.linalg.norm(grid - analytic) <= 0.01
    res = project_polyhedron(region, z, tol=1e-10)
    assert res.converged
    assert np.allclose(res.x, analytic, atol=1e-7)


def test_projection_matches_grid_oracle_randomized():
    """100 random (z, region) pairs on 2-d instances, within grid resolution.

    The grid oracle only sees feasible lattice points, so along the active
    constraint normal it can sit a couple of cells away from the true
    boundary projection; the solver must be feasible, no farther from z
    than the oracle, and within the oracle's discretization error.
    """
    rng = np.random.Generator(np.random.Philox(key=17))
    resolution = 0.02
    for trial in range(100):
        a = rng.uniform(-1, 1, 2)
        while np.linalg.norm(a) < 0.3:
            a = rng.uniform(-1, 1, 2)
        b = rng.uniform(-0.5, 1.5)
        region = make_region(lo=[-2, -2], hi=[2, 2], A=[a], b=[b])
        z = rng.uniform(-3, 3, 2)
        res = project_polyhedron(region, z, tol=1e-9)
        assert res.converged
        assert region.contains(res.x, tol=1e-7)
        oracle = grid_nearest_feasible(region, z, span=6.0, resolution=resolution)
        d_res = np.linalg.norm(res.x - z)
        d_oracle = np.linalg.norm(oracle - z)
        assert d_res <= d_oracle + 1e-7          # never worse than the oracle
        assert d_oracle - d_res <= 2.5 * resolution  # and no better than its error


def test_projection_idempotent(energy):
    """Projecting a projected point moves it by at most the tolerance."""
    region = energy.problem.game.region
    rng = np.random.Generator(np.random.Philox(key=23))
    tol = 1e-8
    for _ in range(10):
        z = rng.uniform(-2, 2, region.dim)
        first = project_polyhedron(region, z, tol=tol)
        second = project_polyhedron(region, first.x, tol=tol)
        assert first.converged and second.converged
        assert np.linalg.norm(second.x - first.x) <= tol


def test_projection_budget_exhaustion_reports():
    region = make_region(lo=[-10, -10], hi=[10, 10], A=[[1, 1]], b=[2])
    res = project_polyhedron(region, np.array([9.0, 9.0]), tol=1e-12, max_iter=2)
    assert not res.converged


# --------------------------------------------------------- natural residual

def test_natural_residual_zero_on_solution_line(testbed):
    """F(x; 1) = 0 anywhere on {x1 - x2 = 1} with the box interior."""
    game = testbed.problem.game
    F = lambda x: game.F(x, np.array([1.0]))
    r = natural_residual(F, game.region, np.array([0.5, -0.5]))
    assert r <= 1e-12


def test_natural_residual_identity_operator():
    region = make_region(lo=[-10, -10], hi=[10, 10])
    F = lambda x: x
    assert natural_residual(F, region, np.zeros(2)) == 0.0
    assert abs(natural_residual(F, region, np.array([1.0, 0.0])) - 1.0) <= 1e-12


def test_natural_residual_rejects_nonfinite(testbed):
    game = testbed.problem.game
    with pytest.raises(ValueError):
        natural_residual(lambda x: x, game.region, np.array([np.nan, 0.0]))


# --------------------------------------------------------- backend parity

def test_dual_project_backend_parity(energy):
    """Compiled and numpy kernels implement the same algorithm."""
    region = energy.problem.game.region
    rng = np.random.Generator(np.random.Philox(key=29))
    step = 1.0 / region.spectral_sq
    for _ in range(10):
        z = np.ascontiguousarray(rng.uniform(-2, 2, region.dim))
        lam0 = np.zeros(region.n_rows)
        x_py, lam_py, it_py, ok_py = kernels_py.dual_project(
            z, region.lo, region.hi, region.A, region.b, lam0, step,
            1e-9, 1e-9, 50_000)
        x_any, lam_any, it_any, ok_any = kernels.dual_project(
            z, region.lo, region.hi, region.A, region.b, lam0, step,
            1e-9, 1e-9, 50_000)
        assert ok_py and ok_any
        assert np.allclose(x_py, x_any, atol=1e-7)
        assert it_py == it_any
