"""The penalty crash: approximate coordinate-wise minimization of

    h(x) = c'x + lambda' r(x) + r(x)'r(x) / (2 mu),   r(x) = Ax - b

over x >= 0 for a schedule of (lambda, mu).  Each outer iteration sweeps
the coordinates several times; afterwards exactly one of mu or lambda is
updated: every ``mu_update_period``-th iteration mu shrinks by
``mu_factor``, otherwise lambda is *replaced* by mu * r(x) (replacement,
not accumulation, is what separates this from an augmented-Lagrangian
multiplier update -- see ``lab.py``).

A run starts with a cheap "sample" phase (few sweeps per iteration) and is
abandoned unless the residual norm drops by ``sample_required_reduction``;
the caller is then expected to fall back to its usual starting point.
"""

import math
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from . import _kernels
from .errors import ParameterError, UnboundedRayError
from .model import (StandardFormLP, TraceRow, compute_residual,
                    idiot_objective, make_report)

STATUS_CONVERGED = "converged_residual"
STATUS_ITERATION_LIMIT = "iteration_limit"
STATUS_ABANDONED = "abandoned_sample_phase"
STATUS_UNBOUNDED = "unbounded_ray_detected"

#: residual drift allowance at outer-iteration boundaries, scaled by
#: 1 + max|b|
DRIFT_TOL = 1e-9

_AUTO = "auto"


@dataclass
class IdiotConfig:
    """Schedule constants.  ``None``/"auto" fields are resolved from the
    problem dimensions by :meth:`resolved`:

    * ``outer_iterations``: 40 below 1000 columns, 80 below 5000, 120
      below 20000, else 200;
    * ``mu0``: max|b| / max(1, max|c|) clamped to [0.001, 1000], which
      balances the linear and penalty terms at the origin;
    * ``mu_update_period``: 6 when n/m < 2 (square-ish systems get more
      minimization per weight level), else 3.
    """

    outer_iterations: Optional[int] = None
    mu0: object = _AUTO
    mu_factor: float = 0.333
    mu_update_period: Optional[int] = None
    warmup_sweeps: int = 2
    main_sweeps: int = 105
    progress_check_start: int = 50
    progress_check_stride: int = 10
    sample_iterations: int = 20
    sample_required_reduction: float = 0.10
    mu_floor: float = 1e-17
    moving_average_window: int = 5
    #: relative residual improvement per check below which a sweep exits
    min_sweep_improvement: float = 0.01

    SAMPLE_ITERATIONS_CAP = 30

    def validate(self):
        if not (0.0 < self.mu_factor < 1.0):
            raise ParameterError(f"mu_factor must lie in (0,1), got {self.mu_factor}")
        if self.mu_floor <= 0.0:
            raise ParameterError(f"mu_floor must be positive, got {self.mu_floor}")
        if self.mu0 != _AUTO:
            if float(self.mu0) <= 0.0:
                raise ParameterError(f"mu0 must be positive, got {self.mu0}")
        for name in ("warmup_sweeps", "main_sweeps", "progress_check_start",
                     "progress_check_stride", "sample_iterations",
                     "moving_average_window"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be at least 1")
        if self.outer_iterations is not None and self.outer_iterations < 1:
            raise ParameterError("outer_iterations must be at least 1")
        if self.mu_update_period is not None and self.mu_update_period < 1:
            raise ParameterError("mu_update_period must be at least 1")
        if self.sample_iterations > self.SAMPLE_ITERATIONS_CAP:
            raise ParameterError(
                f"sample_iterations is capped at {self.SAMPLE_ITERATIONS_CAP}")
        if not (0.0 < self.sample_required_reduction < 1.0):
            raise ParameterError("sample_required_reduction must lie in (0,1)")
        if self.progress_check_start > self.main_sweeps:
            raise ParameterError(
                "progress_check_start cannot exceed main_sweeps")
        return self

    def resolved(self, lp):
        """Concrete copy with all auto fields instantiated for ``lp``."""
        self.validate()
        out = replace(self)
        n, m = lp.n_cols, lp.n_rows
        if out.outer_iterations is None:
            if n < 1000:
                out.outer_iterations = 40
            elif n < 5000:
                out.outer_iterations = 80
            elif n < 20000:
                out.outer_iterations = 120
            else:
                out.outer_iterations = 200
        if out.mu0 == _AUTO:
            bmax = float(np.max(np.abs(lp.b))) if m else 0.0
            cmax = float(np.max(np.abs(lp.c))) if n else 0.0
            out.mu0 = min(max(bmax / max(1.0, cmax), 0.001), 1000.0)
        else:
            out.mu0 = float(out.mu0)
        if out.mu_update_period is None:
            out.mu_update_period = 6 if m > 0 and n / m < 2.0 else 3
        return out

    _INT_FIELDS = ("outer_iterations", "mu_update_period", "warmup_sweeps",
                   "main_sweeps", "progress_check_start",
                   "progress_check_stride", "sample_iterations",
                   "moving_average_window")
    _FLOAT_FIELDS = ("mu_factor", "sample_required_reduction", "mu_floor",
                     "min_sweep_improvement")

    @classmethod
    def from_key_value_text(cls, text):
        """Parse ``field = value`` lines (blank lines and # comments OK)."""
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(
                    f"config line {lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key in cls._INT_FIELDS:
                kwargs[key] = int(value)
            elif key in cls._FLOAT_FIELDS:
                kwargs[key] = float(value)
            elif key == "mu0":
                kwargs[key] = _AUTO if value == _AUTO else float(value)
            else:
                raise ParameterError(
                    f"config line {lineno}: unknown field {key!r}")
        return cls(**kwargs).validate()


@dataclass
class IdiotState:
    """Mutable per-run state.  ``r`` is maintained incrementally by the
    coordinate steps and re-validated against a fresh Ax - b at every
    outer-iteration boundary."""

    x: np.ndarray
    r: np.ndarray
    lam: np.ndarray
    mu: float
    outer_iter: int = 0
    residual_norm_history: List[float] = field(default_factory=list)
    residual_drifts: List[float] = field(default_factory=list)


@dataclass
class SweepResult:
    truncated: bool
    passes_done: int
    steps: int
    h_deltas: Optional[np.ndarray] = None


@dataclass
class IdiotOutcome:
    status: str
    point: np.ndarray
    report: object
    trace: List[TraceRow]
    residual_drifts: List[float]
    h_deltas: Optional[np.ndarray] = None
    state: Optional[IdiotState] = None


def new_state(lp, config, x0=None):
    if x0 is None:
        x = np.zeros(lp.n_cols)
    else:
        x = np.array(x0, dtype=np.float64)
        if x.shape != (lp.n_cols,):
            raise ParameterError(
                f"x0 has length {x.shape}, expected {lp.n_cols}")
        if np.any(x < 0.0):
            raise ParameterError("x0 must be componentwise nonnegative")
    return IdiotState(x=x, r=compute_residual(lp, x),
                      lam=np.zeros(lp.n_rows), mu=float(config.mu0))


def scan_empty_columns(lp, x):
    """Pin variables of empty columns at zero; a negative cost on an empty
    column makes the objective unbounded along that axis."""
    colsq = lp.A.col_sq_norms
    for j in np.flatnonzero(colsq == 0.0):
        if lp.c[j] < 0.0:
            raise UnboundedRayError(int(j))
        x[j] = 0.0


def coordinate_step(lp, state, j):
    """Exact minimization of h along coordinate j subject to x_j >= 0.

    With g = c_j + lambda'a_j + (r'a_j)/mu and q = |a_j|^2 the step is
    t = max(-x_j, -mu g / q); x_j and r update incrementally in one
    traversal of the column.  Reference implementation; ``sweep`` runs the
    compiled equivalent.
    """
    q = float(lp.A.col_sq_norms[j])
    if q == 0.0:
        if lp.c[j] < 0.0:
            raise UnboundedRayError(int(j))
        state.x[j] = 0.0
        return state
    idx, vals = lp.A.col(j)
    g = float(lp.c[j]) + float(state.lam[idx] @ vals) \
        + float(state.r[idx] @ vals) / state.mu
    t = max(-float(state.x[j]), -state.mu * g / q)
    if t != 0.0:
        state.x[j] += t
        state.r[idx] += t * vals
    return state


def sweep(lp, state, repeats, config, record_h=False):
    """Apply coordinate steps to every column, ``repeats`` times, with the
    moving-average progress check from ``progress_check_start`` on.
    Returns whether the sweep stopped before ``repeats`` passes."""
    if repeats < 1:
        raise ParameterError(f"repeats must be at least 1, got {repeats}")
    A = lp.A
    deltas = np.zeros(repeats * lp.n_cols if record_h else 0)
    code, passes, steps, nrec = _kernels.sweep(
        A.indptr, A.indices, A.data, A.col_sq_norms, lp.c,
        state.x, state.r, state.lam, state.mu, repeats,
        config.progress_check_start, config.progress_check_stride,
        config.moving_average_window, config.min_sweep_improvement,
        record_h, deltas)
    return SweepResult(truncated=code != _kernels.SWEEP_COMPLETED,
                       passes_done=passes, steps=steps,
                       h_deltas=deltas[:nrec] if record_h else None)


def _revalidate_residual(lp, state):
    """Boundary check: incremental r against a fresh Ax - b."""
    fresh = compute_residual(lp, state.x)
    scale = 1.0 + (float(np.max(np.abs(lp.b))) if lp.n_rows else 0.0)
    drift = float(np.max(np.abs(state.r - fresh))) if lp.n_rows else 0.0
    state.residual_drifts.append(drift)
    if drift > DRIFT_TOL * scale:
        raise AssertionError(
            f"incremental residual drifted by {drift:.3e} "
            f"(allowed {DRIFT_TOL * scale:.3e}); this is a solver bug")
    state.r = fresh
    return drift


def run_idiot(lp, config=None, x0=None, record_h=False):
    """Full crash run: sample phase, main phase, mu/lambda schedule.

    Terminates with ``converged_residual`` when |r|_2 <= 1e-8 (1 + |b|_2),
    with ``iteration_limit`` at ``outer_iterations``, with
    ``abandoned_sample_phase`` when the sample iterations fail to cut the
    residual norm (the returned point is then the starting point), or with
    ``unbounded_ray_detected``.
    """
    t0 = time.perf_counter()
    cfg = (config if config is not None else IdiotConfig()).resolved(lp)
    state = new_state(lp, cfg, x0)
    start_point = state.x.copy()
    trace: List[TraceRow] = []
    h_chunks = [] if record_h else None

    def outcome(status, point, iters):
        h_all = np.concatenate(h_chunks) if record_h and h_chunks else \
            (np.zeros(0) if record_h else None)
        return IdiotOutcome(
            status=status, point=point,
            report=make_report(lp, point, iters, time.perf_counter() - t0),
            trace=trace, residual_drifts=state.residual_drifts,
            h_deltas=h_all, state=state)

    try:
        scan_empty_columns(lp, state.x)
    except UnboundedRayError:
        return outcome(STATUS_UNBOUNDED, state.x, 0)

    b_norm = float(np.linalg.norm(lp.b))
    residual_tol = 1e-8 * (1.0 + b_norm)
    r0_norm = float(np.linalg.norm(state.r))
    state.residual_norm_history.append(r0_norm)
    if r0_norm <= residual_tol:
        return outcome(STATUS_CONVERGED, state.x, 0)
    gate_target = (1.0 - cfg.sample_required_reduction) * r0_norm

    promoted = False
    status = STATUS_ITERATION_LIMIT
    for k in range(1, cfg.outer_iterations + 1):
        state.outer_iter = k
        in_sample = not promoted and k <= cfg.sample_iterations
        repeats = cfg.warmup_sweeps if in_sample else cfg.main_sweeps
        res = sweep(lp, state, repeats, cfg, record_h=record_h)
        if record_h and res.h_deltas is not None and res.h_deltas.size:
            h_chunks.append(res.h_deltas)
        _revalidate_residual(lp, state)
        rn = float(np.linalg.norm(state.r))
        state.residual_norm_history.append(rn)
        trace.append(TraceRow(
            iter=k, mu=state.mu, lambda_norm=float(np.linalg.norm(state.lam)),
            residual_norm=rn, objective=float(lp.c @ state.x),
            h_value=idiot_objective(lp, state.x, state.lam, state.mu)))
        if rn <= residual_tol:
            status = STATUS_CONVERGED
            break
        if in_sample:
            if rn <= gate_target:
                promoted = True
            elif k == cfg.sample_iterations:
                return outcome(STATUS_ABANDONED, start_point, k)
        if k % cfg.mu_update_period == 0:
            state.mu = max(state.mu * cfg.mu_factor, cfg.mu_floor)
        else:
            state.lam = state.mu * state.r
    return outcome(status, state.x, state.outer_iter)
