"""Pure-numpy kernels: the import-time fallback for the compiled core.

Control flow here mirrors stackseek._core exactly (same updates, same
stopping rules, same status codes) so either backend can serve the solver
layer.  Status codes for the solve loops: 0 converged, 1 budget exhausted,
2 residual divergence (declared-class violation), 3 non-finite values.
"""

import numpy as np

BACKEND_NAME = "python"

_INC_SLACK = 1.0 + 1e-12  # relative slack for counting a residual increase


def dual_project(z, lo, hi, A, b, lam, step, tol_feas, tol_dx, max_iter):
    """Euclidean projection onto {lo<=x<=hi, Ax<=b} by FISTA on the dual.

    The primal iterate is the box clamp of z - A^T lambda; the dual update
    is projected gradient ascent with momentum and gradient restart.
    Returns (x, lam, iterations, converged).
    """
    if A.shape[0] == 0:
        return np.clip(z, lo, hi), lam, 0, True
    lam = lam.copy()
    lam_prev = lam.copy()
    t = 1.0
    x_prev = np.clip(z - A.T @ lam, lo, hi)
    for it in range(1, max_iter + 1):
        t_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * t * t))
        mom = (t - 1.0) / t_next
        w = lam + mom * (lam - lam_prev)
        x = np.clip(z - A.T @ w, lo, hi)
        g = A @ x - b
        lam_next = np.maximum(0.0, w + step * g)
        # gradient restart: momentum fights the ascent direction
        if float((w - lam_next) @ (lam_next - lam)) > 0.0:
            t_next = 1.0
        lam_prev = lam
        lam = lam_next
        t = t_next
        viol = float(np.max(g)) if g.size else 0.0
        dx = float(np.max(np.abs(x - x_prev)))
        x_prev = x
        if viol <= tol_feas and dx <= tol_dx:
            return x, lam, it, True
    return x_prev, lam, max_iter, False


def _project(z, lo, hi, A, b, lam, step, tol, max_iter):
    x, lam, _, _ = dual_project(z, lo, hi, A, b, lam, step, tol, tol, max_iter)
    return x, lam


def solve_affine(Q, c, lo, hi, A, b, x0, lam0, tau, tol, max_iter,
                 div_window, max_halvings, proj_step, proj_tol, proj_max_iter,
                 use_pgd):
    """Extragradient (or projected-gradient) loop for F(x) = Q x + c.

    Returns (x, residual, iterations, status, lam, halvings).
    """
    x = x0.copy()
    lam = lam0.copy()
    prev_res = np.inf
    inc_count = 0
    halvings = 0
    status = 1
    res = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        fx = Q @ x + c
        if not np.all(np.isfinite(fx)):
            status = 3
            break
        xr, lam = _project(x - fx, lo, hi, A, b, lam, proj_step, proj_tol, proj_max_iter)
        res = float(np.linalg.norm(x - xr))
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
            x, lam = _project(x - tau * fx, lo, hi, A, b, lam, proj_step, proj_tol, proj_max_iter)
        else:
            xh, lam = _project(x - tau * fx, lo, hi, A, b, lam, proj_step, proj_tol, proj_max_iter)
            fh = Q @ xh + c
            if not np.all(np.isfinite(fh)):
                status = 3
                break
            x, lam = _project(x - tau * fh, lo, hi, A, b, lam, proj_step, proj_tol, proj_max_iter)
    if status == 1:
        fx = Q @ x + c
        xr, lam = _project(x - fx, lo, hi, A, b, lam, proj_step, proj_tol, proj_max_iter)
        res = float(np.linalg.norm(x - xr))
        if res <= tol:
            status = 0
    return x, res, it, status, lam, halvings
