# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the projection and solve inner loops.

Semantics (updates, stopping rules, status codes) mirror
stackseek.engine.kernels_py; only the execution strategy differs.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, isfinite, INFINITY

cnp.import_array()

BACKEND_NAME = "compiled"

cdef double _INC_SLACK = 1.0 + 1e-12


cdef inline void _clip_into(const double[::1] z, const double[::1] lo, const double[::1] hi,
                            double[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double v
    for i in range(n):
        v = z[i]
        if v < lo[i]:
            v = lo[i]
        elif v > hi[i]:
            v = hi[i]
        out[i] = v


cdef int _dual_project_core(const double[::1] z, const double[::1] lo, const double[::1] hi,
                            const double[:, ::1] A, const double[::1] b,
                            double[::1] lam, double step,
                            double tol_feas, double tol_dx, int max_iter,
                            double[::1] x_out,
                            double[::1] lam_prev, double[::1] w,
                            double[::1] shift, double[::1] g,
                            double[::1] x_prev) noexcept nogil:
    """Shared dual-ascent loop writing the projection into x_out.

    Returns the iteration count on convergence, -max_iter on budget
    exhaustion.  lam is updated in place (warm-startable).
    """
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t p = A.shape[0]
    cdef Py_ssize_t i, j
    cdef int it
    cdef double t = 1.0, t_next, mom, acc, viol, dx, lam_new_j, restart_acc

    if p == 0:
        _clip_into(z, lo, hi, x_out, n)
        return 0

    for j in range(p):
        lam_prev[j] = lam[j]
    # x_prev = clip(z - A^T lam)
    for i in range(n):
        shift[i] = z[i]
    for j in range(p):
        if lam[j] != 0.0:
            for i in range(n):
                shift[i] -= A[j, i] * lam[j]
    _clip_into(shift, lo, hi, x_prev, n)

    for it in range(1, max_iter + 1):
        t_next = 0.5 * (1.0 + sqrt(1.0 + 4.0 * t * t))
        mom = (t - 1.0) / t_next
        # w = lam + mom (lam - lam_prev); shift = z - A^T w
        for i in range(n):
            shift[i] = z[i]
        for j in range(p):
            w[j] = lam[j] + mom * (lam[j] - lam_prev[j])
            if w[j] != 0.0:
                for i in range(n):
                    shift[i] -= A[j, i] * w[j]
        _clip_into(shift, lo, hi, x_out, n)
        # g = A x - b; lam_next = max(0, w + step g); restart test accumulators
        viol = -INFINITY
        restart_acc = 0.0
        for j in range(p):
            acc = 0.0
            for i in range(n):
                acc += A[j, i] * x_out[i]
            acc -= b[j]
            g[j] = acc
            if acc > viol:
                viol = acc
            lam_new_j = w[j] + step * acc
            if lam_new_j < 0.0:
                lam_new_j = 0.0
            restart_acc += (w[j] - lam_new_j) * (lam_new_j - lam[j])
            lam_prev[j] = lam[j]
            lam[j] = lam_new_j
        if restart_acc > 0.0:
            t_next = 1.0
        t = t_next
        dx = 0.0
        for i in range(n):
            acc = fabs(x_out[i] - x_prev[i])
            if acc > dx:
                dx = acc
            x_prev[i] = x_out[i]
        if viol <= tol_feas and dx <= tol_dx:
            return it
    for i in range(n):
        x_out[i] = x_prev[i]
    return -max_iter


def dual_project(const double[::1] z, const double[::1] lo, const double[::1] hi,
                 const double[:, ::1] A, const double[::1] b,
                 const double[::1] lam_in, double step,
                 double tol_feas, double tol_dx, int max_iter):
    """Projection onto {lo<=x<=hi, Ax<=b}; see kernels_py.dual_project."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t p = A.shape[0]
    x_out = np.empty(n)
    lam = np.array(lam_in, dtype=np.float64, copy=True)
    lam_prev = np.empty(p)
    w = np.empty(p)
    g = np.empty(p)
    shift = np.empty(n)
    x_prev = np.empty(n)
    cdef int rc = _dual_project_core(z, lo, hi, A, b, lam, step, tol_feas,
                                     tol_dx, max_iter, x_out, lam_prev, w,
                                     shift, g, x_prev)
    if rc >= 0:
        return x_out, lam, rc, True
    return x_out, lam, max_iter, False


def solve_affine(const double[:, ::1] Q, const double[::1] c,
                 const double[::1] lo, const double[::1] hi,
                 const double[:, ::1] A, const double[::1] b,
                 const double[::1] x0, const double[::1] lam0,
                 double tau, double tol, int max_iter,
                 int div_window, int max_halvings,
                 double proj_step, double proj_tol, int proj_max_iter,
                 bint use_pgd):
    """Extragradient / projected-gradient loop for F(x) = Q x + c.

    Returns (x, residual, iterations, status, lam, halvings); see
    kernels_py.solve_affine for the status codes.
    """
    cdef Py_ssize_t n = x0.shape[0]
    cdef Py_ssize_t p = A.shape[0]
    x_arr = np.array(x0, dtype=np.float64, copy=True)
    lam_arr = np.array(lam0, dtype=np.float64, copy=True)
    cdef double[::1] x = x_arr
    cdef double[::1] lam = lam_arr
    cdef double[::1] fx = np.empty(n)
    cdef double[::1] stepv = np.empty(n)
    cdef double[::1] xr = np.empty(n)
    cdef double[::1] xh = np.empty(n)
    # scratch for the projection core
    cdef double[::1] _lp = np.empty(p)
    cdef double[::1] _w = np.empty(p)
    cdef double[::1] _g = np.empty(p)
    cdef double[::1] _sh = np.empty(n)
    cdef double[::1] _xp = np.empty(n)

    cdef double prev_res = INFINITY, res = INFINITY, acc
    cdef int inc_count = 0, halvings = 0, status = 1, it = 0
    cdef Py_ssize_t i, j
    cdef bint bad

    with nogil:
        for it in range(1, max_iter + 1):
            bad = False
            for i in range(n):
                acc = c[i]
                for j in range(n):
                    acc += Q[i, j] * x[j]
                fx[i] = acc
                if not isfinite(acc):
                    bad = True
            if bad:
                status = 3
                break
            for i in range(n):
                stepv[i] = x[i] - fx[i]
            _dual_project_core(stepv, lo, hi, A, b, lam, proj_step, proj_tol,
                               proj_tol, proj_max_iter, xr, _lp, _w, _sh, _g, _xp)
            res = 0.0
            for i in range(n):
                acc = x[i] - xr[i]
                res += acc * acc
            res = sqrt(res)
            if res <= tol:
                status = 0
                break
            if res > prev_res * _INC_SLACK:
                inc_count += 1
            else:
                inc_count = 0
            prev_res = res
            if inc_count >= div_window:
                if halvings < max_halvings:
                    tau *= 0.5
                    halvings += 1
                    inc_count = 0
                else:
                    status = 2
                    break
            if use_pgd:
                for i in range(n):
                    stepv[i] = x[i] - tau * fx[i]
                _dual_project_core(stepv, lo, hi, A, b, lam, proj_step, proj_tol,
                                   proj_tol, proj_max_iter, xh, _lp, _w, _sh, _g, _xp)
                for i in range(n):
                    x[i] = xh[i]
            else:
                for i in range(n):
                    stepv[i] = x[i] - tau * fx[i]
                _dual_project_core(stepv, lo, hi, A, b, lam, proj_step, proj_tol,
                                   proj_tol, proj_max_iter, xh, _lp, _w, _sh, _g, _xp)
                bad = False
                for i in range(n):
                    acc = c[i]
                    for j in range(n):
                        acc += Q[i, j] * xh[j]
                    fx[i] = acc
                    if not isfinite(acc):
                        bad = True
                if bad:
                    status = 3
                    break
                for i in range(n):
                    stepv[i] = x[i] - tau * fx[i]
                _dual_project_core(stepv, lo, hi, A, b, lam, proj_step, proj_tol,
                                   proj_tol, proj_max_iter, xh, _lp, _w, _sh, _g, _xp)
                for i in range(n):
                    x[i] = xh[i]
        if status == 1:
            bad = False
            for i in range(n):
                acc = c[i]
                for j in range(n):
                    acc += Q[i, j] * x[j]
                fx[i] = acc
                if not isfinite(acc):
                    bad = True
            if not bad:
                for i in range(n):
                    stepv[i] = x[i] - fx[i]
                _dual_project_core(stepv, lo, hi, A, b, lam, proj_step, proj_tol,
                                   proj_tol, proj_max_iter, xr, _lp, _w, _sh, _g, _xp)
                res = 0.0
                for i in range(n):
                    acc = x[i] - xr[i]
                    res += acc * acc
                res = sqrt(res)
                if res <= tol:
                    status = 0
    return x_arr, res, it, status, lam_arr, halvings
