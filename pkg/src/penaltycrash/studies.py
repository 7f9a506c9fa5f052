"""Desk-scale study suites shared by the CLI and the acceptance tests:
random feasible instances checked against the enumeration oracle, the
three reference modes compared on one instance, and the linearization
dimension table."""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import OracleSizeError
from .lab import LabConfig, run_augmented_lagrangian, run_exact_idiot, \
    run_quadratic_penalty
from .model import SparseColMatrix, StandardFormLP
from .oracle import STATUS_OPTIMAL, solve_by_enumeration
from .qap import QapInstance, aj_dimensions, aj_linearize


def random_standard_lp(seed, max_rows=4, max_cols=8, max_resample=50):
    """Seeded random standard-form LP, feasible by construction (b is A
    times a positive integer point) and bounded by oracle check; draws
    integer data in [-5, 5].  Returns (lp, feasible_point, oracle_result).
    """
    for attempt in range(max_resample):
        rng = np.random.default_rng(seed * 1009 + attempt)
        m = int(rng.integers(2, max_rows + 1))
        n = int(rng.integers(m + 2, max_cols + 1))
        dense = rng.integers(-5, 6, size=(m, n)).astype(float)
        x_feas = rng.integers(1, 4, size=n).astype(float)
        c = rng.integers(-5, 6, size=n).astype(float)
        b = dense @ x_feas
        A = SparseColMatrix.from_dense(dense)
        lp = StandardFormLP(c, A, b, name=f"RAND{seed}")
        try:
            res = solve_by_enumeration(lp)
        except OracleSizeError:
            continue
        if res.status == STATUS_OPTIMAL:
            return lp, x_feas, res
    raise RuntimeError(f"no feasible bounded instance found for seed {seed}")


@dataclass
class Theorem1Record:
    seed: int
    m: int
    n: int
    oracle_optimum: float
    final_objective: float
    final_residual_norm: float
    objective_gap: float
    worst_bound_violation: float


def theorem1_study(seeds, config: Optional[LabConfig] = None
                   ) -> List[Theorem1Record]:
    """Exact-minimization runs vs. the enumeration oracle over seeded
    random feasible bounded LPs."""
    records = []
    for seed in seeds:
        lp, x_feas, oracle_res = random_standard_lp(seed)
        traj = run_exact_idiot(lp, config, feasible_reference=x_feas)
        last = traj.rows[-1]
        worst = 0.0
        for row in traj.rows:
            if row.lambda_updated and row.bound_lhs is not None:
                worst = max(worst, row.bound_lhs - row.bound_rhs)
        records.append(Theorem1Record(
            seed=seed, m=lp.n_rows, n=lp.n_cols,
            oracle_optimum=oracle_res.optimum,
            final_objective=last.objective,
            final_residual_norm=last.residual_norm,
            objective_gap=last.objective - oracle_res.optimum,
            worst_bound_violation=worst))
    return records


def default_modes_instance():
    """min x1 + 2 x2  s.t.  x1 + x2 = 1, x >= 0: a one-constraint LP whose
    equality has a nonzero multiplier, so the accumulating and replacing
    lambda updates are visibly different."""
    A = SparseColMatrix.from_dense([[1.0, 1.0]])
    return StandardFormLP(np.array([1.0, 2.0]), A, np.array([1.0]),
                          row_names=["BAL"], col_names=["X1", "X2"],
                          name="MODES1")


def modes_study(lp: Optional[StandardFormLP] = None,
                config: Optional[LabConfig] = None):
    """Run all three reference modes on one instance."""
    if lp is None:
        lp = default_modes_instance()
    return {
        "exact_idiot": run_exact_idiot(lp, config),
        "quadratic_penalty": run_quadratic_penalty(lp, config),
        "augmented_lagrangian": run_augmented_lagrangian(lp, config),
    }


def qap_dims_rows(n_lo=2, n_hi=8):
    """Built dimensions of the linearization against the closed forms."""
    rows = []
    for n in range(n_lo, n_hi + 1):
        q = QapInstance(n=n, F=np.zeros((n, n)), D=np.zeros((n, n)))
        lp = aj_linearize(q)
        fr, fc = aj_dimensions(n)
        rows.append({"n": n, "rows": lp.n_rows, "cols": lp.n_cols,
                     "rows_formula": fr, "cols_formula": fc,
                     "match": lp.n_rows == fr and lp.n_cols == fc})
    return rows
