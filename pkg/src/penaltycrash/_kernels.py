"""JIT-compiled inner loops.

Everything here works on raw CSC arrays (indptr/indices/data) so the hot
paths run at native speed.  The Python-level reference implementations in
``crash.py`` define the semantics; these kernels must match them.
"""

import numpy as np
from numba import njit

# sweep exit codes
SWEEP_COMPLETED = 0
SWEEP_EARLY_EXIT = 1
SWEEP_FIXED_POINT = 2


@njit(cache=True)
def matvec(indptr, indices, data, x, n_rows):
    out = np.zeros(n_rows)
    for j in range(indptr.shape[0] - 1):
        xj = x[j]
        if xj != 0.0:
            for p in range(indptr[j], indptr[j + 1]):
                out[indices[p]] += data[p] * xj
    return out


@njit(cache=True)
def rmatvec(indptr, indices, data, y):
    n_cols = indptr.shape[0] - 1
    out = np.zeros(n_cols)
    for j in range(n_cols):
        acc = 0.0
        for p in range(indptr[j], indptr[j + 1]):
            acc += data[p] * y[indices[p]]
        out[j] = acc
    return out


@njit(cache=True)
def col_sq_norms(indptr, data):
    n_cols = indptr.shape[0] - 1
    out = np.zeros(n_cols)
    for j in range(n_cols):
        acc = 0.0
        for p in range(indptr[j], indptr[j + 1]):
            acc += data[p] * data[p]
        out[j] = acc
    return out


@njit(cache=True, inline="always")
def _coordinate_pass(indptr, indices, data, colsq, c, x, r, lam, inv_mu, mu,
                     record, deltas, n_recorded):
    """One pass of exact single-coordinate minimizations over all columns.

    Empty columns are skipped (callers pin them beforehand).  Returns the
    number of coordinates actually moved and the updated delta count.
    """
    steps = 0
    for j in range(indptr.shape[0] - 1):
        q = colsq[j]
        if q == 0.0:
            continue
        s_lam = 0.0
        s_r = 0.0
        for p in range(indptr[j], indptr[j + 1]):
            i = indices[p]
            v = data[p]
            s_lam += lam[i] * v
            s_r += r[i] * v
        g = c[j] + s_lam + inv_mu * s_r
        t = -mu * g / q
        if t < -x[j]:
            t = -x[j]
        if t != 0.0:
            x[j] += t
            for p in range(indptr[j], indptr[j + 1]):
                r[indices[p]] += t * data[p]
            steps += 1
            if record:
                deltas[n_recorded] = g * t + q * t * t * (0.5 * inv_mu)
                n_recorded += 1
    return steps, n_recorded


@njit(cache=True)
def sweep(indptr, indices, data, colsq, c, x, r, lam, mu, repeats,
          check_start, check_stride, window, min_improvement,
          record, deltas):
    """Repeated coordinate passes with the moving-average progress check.

    From pass ``check_start`` onward, every ``check_stride`` passes the
    current residual norm is compared against the mean of the last
    ``window`` recorded check values; relative improvement below
    ``min_improvement`` exits early.  A pass that moves no coordinate is a
    fixed point and also exits.

    Returns (exit_code, passes_done, total_steps, n_recorded_deltas).
    """
    n_rows = r.shape[0]
    inv_mu = 1.0 / mu
    history = np.zeros(window)
    n_hist = 0
    total_steps = 0
    n_recorded = 0
    for rep in range(1, repeats + 1):
        steps, n_recorded = _coordinate_pass(
            indptr, indices, data, colsq, c, x, r, lam, inv_mu, mu,
            record, deltas, n_recorded)
        total_steps += steps
        if steps == 0:
            return SWEEP_FIXED_POINT, rep, total_steps, n_recorded
        if rep >= check_start and (rep - check_start) % check_stride == 0:
            acc = 0.0
            for i in range(n_rows):
                acc += r[i] * r[i]
            rnorm = np.sqrt(acc)
            if n_hist > 0:
                used = min(n_hist, window)
                mean = 0.0
                for t in range(used):
                    mean += history[(n_hist - 1 - t) % window]
                mean /= used
                if mean <= 0.0:
                    return SWEEP_EARLY_EXIT, rep, total_steps, n_recorded
                if (mean - rnorm) / mean < min_improvement:
                    return SWEEP_EARLY_EXIT, rep, total_steps, n_recorded
            history[n_hist % window] = rnorm
            n_hist += 1
    return SWEEP_COMPLETED, repeats, total_steps, n_recorded


@njit(cache=True)
def minimize_subproblem(indptr, indices, data, colsq, c, b, x, r, lam, mu,
                        tol, max_passes, refresh_every):
    """Coordinate descent to projected-gradient optimality.

    Terminates when every coordinate satisfies |grad_j| <= tol (for
    x_j > 0) or -grad_j <= tol (for x_j = 0).  The residual is recomputed
    from scratch every ``refresh_every`` passes to cap floating drift.

    Returns (converged, passes_done, final_violation).
    """
    n_rows = r.shape[0]
    n_cols = indptr.shape[0] - 1
    inv_mu = 1.0 / mu
    dummy = np.zeros(0)
    passes = 0
    violation = np.inf
    while passes < max_passes:
        _coordinate_pass(indptr, indices, data, colsq, c, x, r, lam,
                         inv_mu, mu, False, dummy, 0)
        passes += 1
        if passes % refresh_every == 0:
            for i in range(n_rows):
                r[i] = -b[i]
            for j in range(n_cols):
                xj = x[j]
                if xj != 0.0:
                    for p in range(indptr[j], indptr[j + 1]):
                        r[indices[p]] += data[p] * xj
        violation = 0.0
        for j in range(n_cols):
            if colsq[j] == 0.0:
                continue
            s_lam = 0.0
            s_r = 0.0
            for p in range(indptr[j], indptr[j + 1]):
                i = indices[p]
                v = data[p]
                s_lam += lam[i] * v
                s_r += r[i] * v
            g = c[j] + s_lam + inv_mu * s_r
            if x[j] > 0.0:
                viol = abs(g)
            else:
                viol = -g if g < 0.0 else 0.0
            if viol > violation:
                violation = viol
        if violation <= tol:
            return True, passes, violation
    return False, passes, violation
