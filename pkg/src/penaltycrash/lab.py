"""Reference modes that bracket the crash solver.

* ``exact_idiot``: the same outer loop as the crash, but every subproblem
  is minimized to a projected-gradient tolerance.  When the penalty weight
  is driven to zero this converges to an optimal LP solution, which the
  test suite verifies against the enumeration oracle.
* ``quadratic_penalty``: the multiplier stays identically zero, leaving
  the pure penalty c'x + r'r/(2 mu).
* ``augmented_lagrangian``: identical loop, but the multiplier
  *accumulates* (lambda += mu r, or lambda += r/mu in the conventional
  scaling) instead of being replaced; its limit is the constraint
  multiplier rather than zero.

Each run records, per outer iteration, the residual bound

    r'r <= 2 mu (c'xbar - c'x - lambda'r)

for a supplied feasible point xbar; this is the inequality that drives the
limiting-optimality argument and it must hold whenever the subproblem is
minimized accurately.
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from . import _kernels
from .errors import ParameterError, SubproblemToleranceError, UnboundedRayError
from .model import compute_residual, idiot_objective
from .crash import scan_empty_columns

MODE_EXACT_IDIOT = "exact_idiot"
MODE_QUADRATIC_PENALTY = "quadratic_penalty"
MODE_AUGMENTED_LAGRANGIAN = "augmented_lagrangian"
MODES = (MODE_EXACT_IDIOT, MODE_QUADRATIC_PENALTY, MODE_AUGMENTED_LAGRANGIAN)

#: multiplier accumulation scalings for the augmented-Lagrangian mode:
#: "mu_scaled" adds mu * r, "conventional" adds r / mu (the update that
#: matches a penalty term of r'r / (2 mu)).
UPDATE_MU_SCALED = "mu_scaled"
UPDATE_CONVENTIONAL = "conventional"

_RULE_REPLACE = "replace"
_RULE_NONE = "none"

#: residual recompute cadence inside long subproblem runs
_REFRESH_EVERY = 128


@dataclass
class LabConfig:
    mode: str = MODE_EXACT_IDIOT
    subproblem_tolerance: float = 1e-9
    tau_factor: float = 0.1
    tau_floor: float = 1e-10
    mu0: float = 1.0
    mu_factor: float = 0.333
    mu_floor: float = 1e-12
    mu_update_period: int = 3
    multiplier_update: str = UPDATE_MU_SCALED
    max_outer_iterations: int = 100
    max_subproblem_passes: int = 500_000

    def validate(self):
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.subproblem_tolerance <= 0.0:
            raise ParameterError("subproblem_tolerance must be positive")
        if not (0.0 < self.mu_factor < 1.0):
            raise ParameterError("mu_factor must lie in (0,1)")
        if not (0.0 < self.tau_factor < 1.0):
            raise ParameterError("tau_factor must lie in (0,1)")
        if self.mu0 <= 0.0 or self.mu_floor <= 0.0 or self.tau_floor <= 0.0:
            raise ParameterError("mu0, mu_floor and tau_floor must be positive")
        if self.mu_update_period < 1 or self.max_outer_iterations < 1:
            raise ParameterError("counts must be at least 1")
        if self.multiplier_update not in (UPDATE_MU_SCALED, UPDATE_CONVENTIONAL):
            raise ParameterError(
                f"unknown multiplier update {self.multiplier_update!r}")
        return self


@dataclass
class LabRow:
    """One outer iteration of a reference run.  ``bound_gap`` is
    rhs - lhs of the residual bound (nonnegative when it holds) for the
    supplied feasible point, if any."""

    iter: int
    mu: float
    lambda_norm: float
    residual_norm: float
    objective: float
    h_value: float
    lambda_updated: bool
    bound_lhs: Optional[float] = None
    bound_rhs: Optional[float] = None
    h_at_reference: Optional[float] = None


@dataclass
class LabTrajectory:
    mode: str
    rows: List[LabRow] = field(default_factory=list)
    points: List[np.ndarray] = field(default_factory=list)

    @property
    def final_point(self):
        return self.points[-1] if self.points else None

    @property
    def final_lambda_norm(self):
        return self.rows[-1].lambda_norm if self.rows else 0.0

    def trace_rows(self):
        """View as crash-style trace rows (for the shared CSV schema)."""
        from .model import TraceRow
        return [TraceRow(iter=r.iter, mu=r.mu, lambda_norm=r.lambda_norm,
                         residual_norm=r.residual_norm, objective=r.objective,
                         h_value=r.h_value) for r in self.rows]


def minimize_subproblem(lp, lam, mu, x_start, tol, max_passes=500_000):
    """Minimize h over x >= 0 to projected-gradient optimality: for every
    coordinate, |grad| <= tol where x > 0 and max(0, -grad) <= tol where
    x = 0.  Pure function: returns a new point."""
    if tol <= 0.0:
        raise ParameterError(f"tolerance must be positive, got {tol}")
    if mu <= 0.0:
        raise ParameterError(f"mu must be positive, got {mu}")
    x = np.array(x_start, dtype=np.float64)
    if x.shape != (lp.n_cols,):
        raise ParameterError(f"x_start has shape {x.shape}, expected {lp.n_cols}")
    if np.any(x < 0.0):
        raise ParameterError("x_start must be componentwise nonnegative")
    lam = np.asarray(lam, dtype=np.float64)
    scan_empty_columns(lp, x)
    r = compute_residual(lp, x)
    A = lp.A
    converged, passes, violation = _kernels.minimize_subproblem(
        A.indptr, A.indices, A.data, A.col_sq_norms, lp.c, lp.b, x, r, lam,
        float(mu), float(tol), int(max_passes), _REFRESH_EVERY)
    if not converged:
        raise SubproblemToleranceError(x, violation, tol, passes)
    return x


def _lambda_rule(mode, multiplier_update, lambda_updates_enabled):
    if mode == MODE_QUADRATIC_PENALTY or not lambda_updates_enabled:
        return _RULE_NONE
    if mode == MODE_EXACT_IDIOT:
        return _RULE_REPLACE
    return multiplier_update


def _run(lp, cfg, rule, x0=None, feasible_reference=None):
    cfg.validate()
    xbar = None
    cxbar = None
    if feasible_reference is not None:
        xbar = np.asarray(feasible_reference, dtype=np.float64)
        cxbar = float(lp.c @ xbar)
    x = np.zeros(lp.n_cols) if x0 is None else np.array(x0, dtype=np.float64)
    lam = np.zeros(lp.n_rows)
    mu = cfg.mu0
    tau = cfg.subproblem_tolerance
    traj = LabTrajectory(mode=cfg.mode)
    residual_tol = 1e-12 * (1.0 + float(np.linalg.norm(lp.b)))

    for k in range(1, cfg.max_outer_iterations + 1):
        x = minimize_subproblem(lp, lam, mu, x, tau,
                                max_passes=cfg.max_subproblem_passes)
        r = compute_residual(lp, x)
        rn = float(np.linalg.norm(r))
        mu_turn = k % cfg.mu_update_period == 0
        row = LabRow(
            iter=k, mu=mu, lambda_norm=float(np.linalg.norm(lam)),
            residual_norm=rn, objective=float(lp.c @ x),
            h_value=idiot_objective(lp, x, lam, mu),
            lambda_updated=not mu_turn)
        if xbar is not None:
            row.bound_lhs = float(r @ r)
            row.bound_rhs = float(
                2.0 * mu * (cxbar - lp.c @ x - lam @ r))
            row.h_at_reference = idiot_objective(lp, xbar, lam, mu)
        traj.rows.append(row)
        traj.points.append(x.copy())
        if rn <= residual_tol:
            break
        if mu_turn:
            mu = max(mu * cfg.mu_factor, cfg.mu_floor)
        elif rule == _RULE_REPLACE:
            lam = mu * r
        elif rule == UPDATE_MU_SCALED:
            lam = lam + mu * r
        elif rule == UPDATE_CONVENTIONAL:
            lam = lam + r / mu
        # _RULE_NONE: lambda stays identically zero
        tau = max(tau * cfg.tau_factor, cfg.tau_floor)
    return traj


def run_exact_idiot(lp, config=None, x0=None, feasible_reference=None,
                    lambda_updates=True):
    """Outer loop with exact (to-tolerance) subproblem minimization and the
    replacement multiplier update.  With ``lambda_updates=False`` the
    multiplier stays zero, which must reproduce the quadratic-penalty mode
    bit for bit."""
    cfg = replace(config if config is not None else LabConfig(),
                  mode=MODE_EXACT_IDIOT)
    rule = _lambda_rule(cfg.mode, cfg.multiplier_update, lambda_updates)
    return _run(lp, cfg, rule, x0=x0, feasible_reference=feasible_reference)


def run_quadratic_penalty(lp, config=None, x0=None, feasible_reference=None):
    cfg = replace(config if config is not None else LabConfig(),
                  mode=MODE_QUADRATIC_PENALTY)
    return _run(lp, cfg, _RULE_NONE, x0=x0,
                feasible_reference=feasible_reference)


def run_augmented_lagrangian(lp, config=None, x0=None,
                             feasible_reference=None):
    cfg = replace(config if config is not None else LabConfig(),
                  mode=MODE_AUGMENTED_LAGRANGIAN)
    return _run(lp, cfg, cfg.multiplier_update, x0=x0,
                feasible_reference=feasible_reference)


def run_mode(lp, mode, config=None, **kwargs):
    if mode == MODE_EXACT_IDIOT:
        return run_exact_idiot(lp, config, **kwargs)
    if mode == MODE_QUADRATIC_PENALTY:
        return run_quadratic_penalty(lp, config, **kwargs)
    if mode == MODE_AUGMENTED_LAGRANGIAN:
        return run_augmented_lagrangian(lp, config, **kwargs)
    raise ParameterError(f"unknown mode {mode!r}")
