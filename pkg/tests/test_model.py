"""Game records, assumption spot-checks, and their oracle examples."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackseek import (check_gradient, check_monotonicity,
                       check_strong_convexity, eval_pseudogradient,
                       make_region)
from stackseek.errors import (ConstructionFault, DimensionMismatch,
                              EvaluationFault)
from stackseek.model import (Blocks, ParametricGame, SelectionFunction,
                             sample_feasible)

from conftest import fd_gradient


# ---------------------------------------------------------------- regions

def test_region_box_only_feasible_point():
    r = make_region(lo=[-1, -2], hi=[1, 2])
    assert r.contains(r.feasible_point)
    assert r.n_rows == 0


def test_region_with_rows_certifies_feasibility():
    r = make_region(lo=[-10, -10], hi=[10, 10], A=[[1, 1]], b=[2])
    assert r.contains(r.feasible_point)


def test_region_empty_box_rejected():
    with pytest.raises(ConstructionFault):
        make_region(lo=[1.0], hi=[0.0])


def test_region_infeasible_names_row():
    # x1 + x2 <= -100 cannot hold inside [-1, 1]^2
    with pytest.raises(ConstructionFault, match="sum_row"):
        make_region(lo=[-1, -1], hi=[1, 1], A=[[1, 1]], b=[-100],
                    row_labels=["sum_row"])


def test_region_equalities_become_row_pairs():
    r = make_region(lo=[-5, -5], hi=[5, 5], equalities=([[1.0, -1.0]], [1.0]))
    assert r.n_rows == 2
    x = r.feasible_point
    assert abs(x[0] - x[1] - 1.0) < 1e-7


# --------------------------------------------- pseudogradient evaluation

def test_eval_pseudogradient_illustrative_example(illustrative):
    """Eq-10 game at eps=0.1, y=0.9, x=(2,3): finite differences of the
    follower costs give (5, 5)."""
    game = illustrative.problem.game
    x = np.array([2.0, 3.0])
    y = np.array([0.9])
    out = eval_pseudogradient(game, x, y)

    j1, j2 = game.cost_values
    fd1 = fd_gradient(lambda t: j1(np.array([t[0], x[1]]), y), x[:1])[0]
    fd2 = fd_gradient(lambda t: j2(np.array([x[0], t[0]]), y), x[1:])[0]
    oracle = np.array([fd1, fd2])
    assert np.allclose(out, oracle, rtol=1e-7)
    assert np.allclose(oracle, [5.0, 5.0], rtol=1e-7)
    assert np.allclose(out, [5.0, 5.0])


def test_eval_pseudogradient_origin_zero(illustrative):
    game = illustrative.problem.game
    for y in (0.2, 0.9, 3.0):
        assert np.allclose(eval_pseudogradient(game, np.zeros(2), np.array([y])), 0.0)


def test_eval_pseudogradient_testbed(testbed):
    """F(x; y) = A x - (y, -y) evaluated directly."""
    game = testbed.problem.game
    out = eval_pseudogradient(game, np.zeros(2), np.array([1.0]))
    A = np.array([[1.0, -1.0], [-1.0, 1.0]])
    oracle = A @ np.zeros(2) - np.array([1.0, -1.0])
    assert np.array_equal(out, oracle)
    assert np.allclose(out, [-1.0, 1.0])


def test_eval_pseudogradient_rejects_bad_dims(testbed):
    game = testbed.problem.game
    with pytest.raises(DimensionMismatch):
        eval_pseudogradient(game, np.zeros(3), np.array([1.0]))
    with pytest.raises(DimensionMismatch):
        eval_pseudogradient(game, np.zeros(2), np.array([1.0, 2.0]))


def test_eval_pseudogradient_nonfinite_fault():
    region = make_region(lo=[-1], hi=[1])
    game = ParametricGame(blocks=Blocks((1,)), F=lambda x, y: np.array([np.nan]),
                          region=region, m=1)
    with pytest.raises(EvaluationFault):
        eval_pseudogradient(game, np.zeros(1), np.array([0.0]))


# ------------------------------------------------------ monotonicity check

def test_monotonicity_testbed_passes(testbed):
    """A is symmetric PSD: the inner product equals (u1-u2)^2 >= 0."""
    rep = check_monotonicity(testbed.problem.game, 1.0, sample_count=1000, rng_seed=0)
    assert rep.passed
    assert rep.min_inner_product >= 0.0
    assert rep.violating_pair is None


def test_monotonicity_illustrative_at_one(illustrative):
    # a = y + eps = 1: inner product is (u + w)^2 >= 0
    rep = check_monotonicity(illustrative.problem.game, 0.9, sample_count=1000,
                             rng_seed=0)
    assert rep.passed


def test_monotonicity_illustrative_at_four_fails(illustrative):
    """a=4: the quadratic form a u^2 + w^2 + (1+a) u w is indefinite
    (u=1, w=-2 gives 4 + 4 - 10 = -2)."""
    game = illustrative.problem.game
    u, w = 1.0, -2.0
    a = 4.0
    hand = a * u * u + w * w + (1 + a) * u * w
    assert hand == -2.0
    rep = check_monotonicity(game, a - 0.1, sample_count=1000, rng_seed=0)
    assert not rep.passed
    assert rep.violating_pair is not None
    x1, x2 = rep.violating_pair
    d = x1 - x2
    fy = np.array([a - 0.1])
    inner = (eval_pseudogradient(game, x1, fy) - eval_pseudogradient(game, x2, fy)) @ d
    assert inner < 0


def test_monotonicity_sigma_shifted(testbed_strong):
    rep = check_monotonicity(testbed_strong.problem.game, 1.0, sample_count=1000,
                             rng_seed=3)
    assert rep.passed  # sigma-shifted test uses the declared modulus


def test_monotonicity_requires_samples(testbed):
    with pytest.raises(ValueError):
        check_monotonicity(testbed.problem.game, 1.0, sample_count=0)


# --------------------------------------------------- strong convexity check

def test_strong_convexity_quadratic_exact():
    """phi = ||x||^2 / 2 with mu = 1 is the equality case of the bound."""
    phi = SelectionFunction(value=lambda x: 0.5 * float(x @ x),
                            grad=lambda x: np.asarray(x, float), mu=1.0,
                            quadratic=(np.eye(3), np.zeros(3)))
    rep = check_strong_convexity(phi, 1.0, sample_count=300, rng_seed=0)
    assert rep.passed
    assert abs(rep.worst_slack) < 1e-12


def test_strong_convexity_weighted():
    # Hessian diag(2, 200): smallest eigenvalue 2
    phi = SelectionFunction(
        value=lambda x: (x[0] - 1.0) ** 2 + 100.0 * x[1] ** 2,
        grad=lambda x: np.array([2.0 * (x[0] - 1.0), 200.0 * x[1]]), mu=2.0,
        quadratic=(np.diag([2.0, 200.0]), np.array([-2.0, 0.0])))
    assert check_strong_convexity(phi, 2.0, sample_count=300, rng_seed=1).passed


def test_strong_convexity_linear_fails():
    phi = SelectionFunction(value=lambda x: float(x[0]),
                            grad=lambda x: np.array([1.0]), mu=1.0,
                            quadratic=(np.zeros((1, 1)), np.array([1.0])))
    rep = check_strong_convexity(phi, 1.0, sample_count=200, rng_seed=2)
    assert not rep.passed
    assert rep.violating_pair is not None


# --------------------------------------------------------- gradient checks

def test_phi_gradients_match_fd(testbed, illustrative, energy):
    for sc in (testbed, illustrative, energy):
        phi = sc.problem.phi
        rep = check_gradient(phi.value, phi.grad, dim=sc.problem.game.n,
                             sample_count=100, rng_seed=0)
        assert rep.passed, rep


def test_pseudogradient_matches_fd_of_costs(illustrative, energy):
    """Blockwise finite differences of the J_i values reproduce F
    (relative error <= 1e-5 on 100 random points per scenario)."""
    for sc, y in ((illustrative, np.array([0.9])), (energy, None)):
        game = sc.problem.game
        y = sc.problem.y0 if y is None else y
        rng = np.random.Generator(np.random.Philox(key=11))
        offsets = game.blocks.offsets
        for _ in range(100):
            x = rng.uniform(-2.0, 2.0, game.n)
            full = eval_pseudogradient(game, x, y)
            fd = np.empty(game.n)
            for i, (off, size) in enumerate(zip(offsets, game.blocks.sizes)):
                cost = game.cost_values[i]

                def restricted(block, off=off, size=size, cost=cost):
                    z = x.copy()
                    z[off:off + size] = block
                    return cost(z, y)

                fd[off:off + size] = fd_gradient(restricted, x[off:off + size])
            err = np.linalg.norm(fd - full) / max(1.0, np.linalg.norm(full))
            assert err <= 1e-5


def test_sample_feasible_respects_region(energy):
    region = energy.problem.game.region
    pts = sample_feasible(region, 20, rng=5)
    for p in pts:
        assert region.contains(p, tol=1e-5)


# ----------------------------------------------------------- hypothesis

@given(st.lists(st.floats(-50, 50), min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_blocks_split_roundtrip(values):
    x = np.asarray(values)
    blocks = Blocks(tuple(1 for _ in values))
    parts = blocks.split(x)
    assert np.array_equal(np.concatenate(parts), x)
