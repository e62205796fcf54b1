"""Sphere sampling, schedules, the two-point estimator, and the seek loop."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stackseek import (ScheduleParams, ViSolveParams, estimate_gradient,
                       sample_sphere, schedule, seek, stationarity_profile)
from stackseek.rng import make_rng
from stackseek.seeker import Trace


# -------------------------------------------------------------- sample_sphere

def test_sphere_m1_symmetric_frequencies():
    rng = make_rng(0)
    draws = np.array([sample_sphere(1, rng)[0] for _ in range(10_000)])
    assert set(np.unique(draws)) == {-1.0, 1.0}
    assert abs(np.mean(draws > 0) - 0.5) <= 0.02


def test_sphere_unit_norm():
    rng = make_rng(1)
    for m in (1, 2, 3, 7, 20):
        for _ in range(50):
            assert abs(np.linalg.norm(sample_sphere(m, rng)) - 1.0) <= 1e-12


def test_sphere_moments_m3():
    """E[v] = 0 with per-coordinate sigma = sqrt(1/(3 N))."""
    rng = make_rng(2)
    N = 100_000
    draws = np.array([sample_sphere(3, rng) for _ in range(N)])
    sigma = np.sqrt(1.0 / (3 * N))
    assert np.all(np.abs(draws.mean(axis=0)) <= 3 * sigma)
    # second moment E[v v^T] = I/3
    cov = draws.T @ draws / N
    assert np.allclose(cov, np.eye(3) / 3.0, atol=0.01)


def test_sphere_rejects_bad_m():
    with pytest.raises(ValueError):
        sample_sphere(0, make_rng(0))


# ------------------------------------------------------------------ schedule

def test_schedule_k0_m2():
    p = ScheduleParams(eta_bar=1.0, delta_bar=1.0, beta_bar=1.0, alpha=1.0, m=2)
    eta, delta, beta = schedule(0, p)
    assert eta == pytest.approx(0.5)
    assert delta == pytest.approx(1.0 / np.sqrt(2.0))
    assert beta == pytest.approx(1.0)


def test_schedule_k3_m1():
    p = ScheduleParams(eta_bar=1.0, delta_bar=1.0, beta_bar=1.0, alpha=1.0, m=1)
    eta, delta, beta = schedule(3, p)
    assert eta == pytest.approx(0.5)
    assert delta == pytest.approx(4.0 ** -0.25)
    assert beta == pytest.approx(0.25)


@given(k=st.integers(0, 10_000),
       alpha=st.floats(0.51, 3.0),
       m=st.integers(1, 8))
@settings(max_examples=100, deadline=None)
def test_schedule_positive_and_nonincreasing(k, alpha, m):
    p = ScheduleParams(eta_bar=0.7, delta_bar=1.3, beta_bar=2.0, alpha=alpha, m=m)
    cur = schedule(k, p)
    nxt = schedule(k + 1, p)
    assert all(v > 0 for v in cur)
    assert all(n <= c for n, c in zip(nxt, cur))


def test_schedule_params_validation():
    with pytest.raises(ValueError, match="alpha"):
        ScheduleParams(eta_bar=1.0, delta_bar=1.0, beta_bar=1.0, alpha=0.5, m=1)
    with pytest.raises(ValueError):
        ScheduleParams(eta_bar=1.0, delta_bar=-1.0, beta_bar=1.0, alpha=1.0, m=1)


# ---------------------------------------------------------- estimate_gradient

def test_estimator_linear_objective():
    """J0 = c . y with c=(1,0), v=(1,0), delta=0.1: (m/delta)(delta c.v) v = (2,0)."""
    j0 = lambda y, x: float(y[0])
    y = np.zeros(2)
    v = np.array([1.0, 0.0])
    y_hat = y + 0.1 * v
    g = estimate_gradient(j0, y, y_hat, np.zeros(1), np.zeros(1), 0.1, 2, v)
    assert np.allclose(g, [2.0, 0.0])


def test_estimator_constant_objective():
    j0 = lambda y, x: 3.25
    v = np.array([0.0, 1.0])
    g = estimate_gradient(j0, np.zeros(2), 0.05 * v, None, None, 0.05, 2, v)
    assert np.array_equal(g, np.zeros(2))


def test_estimator_paper_sign_flips():
    j0 = lambda y, x: float(y[0])
    v = np.array([1.0, 0.0])
    g = estimate_gradient(j0, np.zeros(2), 0.1 * v, None, None, 0.1, 2, v)
    gp = estimate_gradient(j0, np.zeros(2), 0.1 * v, None, None, 0.1, 2, v,
                           paper_sign=True)
    assert np.array_equal(gp, -g)


def test_estimator_unbiased_on_quadratic():
    """Sphere two-point estimator is exactly unbiased for quadratics:
    Monte Carlo mean within 3 standard errors of grad J0 = y."""
    j0 = lambda y, x: 0.5 * float(y @ y)
    y = np.array([1.0, 1.0])
    delta, m, N = 0.01, 2, 100_000
    rng = make_rng(4)
    samples = np.empty((N, m))
    for i in range(N):
        v = sample_sphere(m, rng)
        samples[i] = estimate_gradient(j0, y, y + delta * v, None, None, delta, m, v)
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / np.sqrt(N)
    assert np.all(np.abs(mean - y) <= 3 * se)


def test_estimator_validates_inputs():
    j0 = lambda y, x: 0.0
    with pytest.raises(ValueError):
        estimate_gradient(j0, np.zeros(2), np.zeros(2), None, None, -0.1, 2,
                          np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        estimate_gradient(j0, np.zeros(2), np.zeros(2), None, None, 0.1, 2,
                          np.array([2.0, 0.0]))


# ------------------------------------------------------------------- seek

def _params(**kw):
    defaults = dict(eta_bar=1 / 6, delta_bar=1.0, beta_bar=1.0, alpha=1.0, m=1)
    defaults.update(kw)
    return ScheduleParams(**defaults)


def test_seek_zero_step_keeps_y_constant(testbed):
    trace = seek(testbed.problem, _params(eta_bar=0.0), K=20, rng=3,
                 inner=ViSolveParams(tol=1e-8))
    ys = np.array([r.y[0] for r in trace.records])
    assert np.all(ys == ys[0])


def test_seek_single_step_bookkeeping(testbed):
    trace = seek(testbed.problem, _params(), K=1, rng=11,
                 inner=ViSolveParams(tol=1e-8))
    assert len(trace) == 1
    r = trace.records[0]
    assert r.k == 0
    assert np.array_equal(r.y_hat, r.y + r.delta * r.v)  # exact float identity
    assert abs(np.linalg.norm(r.v) - 1.0) <= 1e-12


def test_seek_bitwise_reproducible(testbed):
    a = seek(testbed.problem, _params(), K=60, rng=7, inner=ViSolveParams(tol=1e-8))
    b = seek(testbed.problem, _params(), K=60, rng=7, inner=ViSolveParams(tol=1e-8))
    for ra, rb in zip(a.records, b.records):
        assert np.array_equal(ra.y, rb.y)
        assert np.array_equal(ra.g_hat, rb.g_hat)
        assert ra.j0 == rb.j0


def test_seek_parallel_inner_matches_serial(testbed):
    a = seek(testbed.problem, _params(), K=40, rng=5, inner=ViSolveParams(tol=1e-8))
    b = seek(testbed.problem, _params(), K=40, rng=5, inner=ViSolveParams(tol=1e-8),
             parallel_inner=True)
    for ra, rb in zip(a.records, b.records):
        assert np.array_equal(ra.y, rb.y)
        assert np.array_equal(ra.x, rb.x)


def test_seek_eta_bar_bound_enforced(testbed):
    # testbed declares ell_tilde = 3, so eta_bar must stay <= m/(2*3)
    with pytest.raises(ValueError, match="eta_bar"):
        seek(testbed.problem, _params(eta_bar=0.5), K=1, rng=0)


def test_seek_inner_fault_halts_with_partial_trace(testbed):
    trace = seek(testbed.problem, _params(), K=10, rng=9,
                 inner=ViSolveParams(tol=1e-13, max_iterations=2))
    assert trace.fault is not None
    assert 1 <= len(trace) <= 10


def test_seek_converges_toward_induced_optimum(testbed):
    """K=2000, seed 7: reproducible run whose stationarity profile decays.

    The eta-weighted profile is bounded below by the transient mass over
    sum(eta): profile(2000)/profile(100) >= sum_eta(100)/sum_eta(2000)
    ~ 0.21, so the decade-scale 10x decay is asserted at K = 10^4 in the
    acceptance suite; here the shorter run must sit near that floor.
    """
    trace = seek(testbed.problem, _params(), K=2000, rng=7,
                 inner=ViSolveParams(tol=1e-8))
    assert trace.fault is None
    prof_100 = stationarity_profile(
        Trace(records=trace.records[:100], meta=trace.meta, problem=trace.problem),
        testbed.x_star_phi)
    prof_full = stationarity_profile(trace, testbed.x_star_phi)
    assert prof_full <= 0.25 * prof_100
    # the iterate itself parks near the analytic induced optimum 2/3
    assert abs(trace.records[-1].y[0] - 2.0 / 3.0) <= 0.05


# -------------------------------------------------------- stationarity profile

def test_profile_zero_at_stationary_point(testbed):
    """A trace pinned at the induced optimum has zero fd gradient."""
    y_star = 2.0 / 3.0
    problem = testbed.problem
    trace = seek(problem, _params(), K=5, rng=1, inner=ViSolveParams(tol=1e-8))
    # rebuild records at the exact stationary point
    recs = [r.__class__(**{**r.__dict__, "y": np.array([y_star])})
            for r in trace.records]
    pinned = Trace(records=recs, meta=trace.meta, problem=problem)
    val = stationarity_profile(pinned, testbed.x_star_phi)
    assert val <= 1e-7  # fd error only


def test_profile_single_record(testbed):
    trace = seek(testbed.problem, _params(), K=1, rng=2,
                 inner=ViSolveParams(tol=1e-8))
    y0 = trace.records[0].y
    h = 1e-4 * (1 + abs(y0[0]))
    J = lambda t: testbed.problem.j0(np.array([t]), testbed.x_star_phi(t))
    g = (J(y0[0] + h) - J(y0[0] - h)) / (2 * h)
    assert stationarity_profile(trace, testbed.x_star_phi) == pytest.approx(g * g, rel=1e-12)


def test_profile_rejects_empty(testbed):
    with pytest.raises(ValueError):
        stationarity_profile(Trace(records=[], problem=testbed.problem),
                             testbed.x_star_phi)


# ------------------------------------------------- time-scale separation

def timescale_ratio(K, alpha, m=1):
    p = ScheduleParams(eta_bar=1.0, delta_bar=1.0, beta_bar=1.0, alpha=alpha, m=m)
    vals = np.array([schedule(k, p) for k in range(K)])
    eta, delta, beta = vals[:, 0], vals[:, 1], vals[:, 2]
    return float(np.sum(beta ** 2 * eta / delta ** 2) / np.sum(eta))


@pytest.mark.parametrize("alpha", [0.6, 0.75, 1.0])
def test_timescale_ratio_decreasing_in_k(alpha):
    r = [timescale_ratio(K, alpha) for K in (100, 1000, 10_000)]
    assert r[0] > r[1] > r[2]


# -------------------------------------------------------- estimator bias bound

def test_ghat_bias_bound_vs_ideal(testbed):
    """With analytic x_beta and x*_phi, the regularization bias of the
    estimator obeys ||ghat - g|| <= (m/delta) L2 (||x_b(y)-x*(y)|| +
    ||x_b(yh)-x*(yh)||) at every iteration."""
    problem = testbed.problem
    L2 = problem.j0.L2
    trace = seek(problem, _params(), K=200, rng=13, inner=ViSolveParams(tol=1e-8))
    for r in trace.records:
        y, y_hat, v, delta, beta = r.y, r.y_hat, r.v, r.delta, r.beta
        xb, xb_hat = testbed.x_beta(y[0], beta), testbed.x_beta(y_hat[0], beta)
        xs, xs_hat = testbed.x_star_phi(y[0]), testbed.x_star_phi(y_hat[0])
        g_hat = estimate_gradient(problem.j0, y, y_hat, xb, xb_hat, delta, 1, v)
        g_ideal = estimate_gradient(problem.j0, y, y_hat, xs, xs_hat, delta, 1, v)
        rhs = (1 / delta) * L2 * (np.linalg.norm(xb - xs) + np.linalg.norm(xb_hat - xs_hat))
        assert np.linalg.norm(g_hat - g_ideal) <= rhs + 1e-12
