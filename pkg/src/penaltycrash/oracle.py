"""Exhaustive ground truth for tiny standard-form LPs.

Every basic feasible solution lives on a linearly independent column
subset, so enumerating subsets of size rank(A), solving each square-ish
system, and keeping nonnegative consistent solutions finds the optimum of
any feasible bounded instance.  Unboundedness is detected separately via
minimal-support recession directions: a one-signed null vector d of some
column subset (Ad = 0, d >= 0) with c'd < 0.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from .errors import OracleSizeError
from .model import StandardFormLP

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"
STATUS_UNBOUNDED = "unbounded"

#: enumeration guards: basis size (= rank) and number of subsets
MAX_BASIS_SIZE = 8
MAX_BASES = 100_000


@dataclass
class OracleResult:
    status: str
    optimum: Optional[float] = None
    vertex: Optional[np.ndarray] = None


def _matrix_rank(dense):
    if dense.size == 0:
        return 0
    return int(np.linalg.matrix_rank(dense))


def solve_by_enumeration(lp: StandardFormLP, feas_tol=1e-9):
    """Solve a tiny LP exhaustively; raises OracleSizeError beyond the
    enumeration guards."""
    m, n = lp.shape
    dense = lp.A.to_dense()
    rank = _matrix_rank(dense)
    if rank > MAX_BASIS_SIZE:
        raise OracleSizeError(
            f"rank {rank} exceeds the enumeration guard {MAX_BASIS_SIZE}")
    if comb(n, rank) > MAX_BASES:
        raise OracleSizeError(
            f"C({n},{rank}) = {comb(n, rank)} exceeds the enumeration "
            f"guard {MAX_BASES}")

    b = lp.b
    scale = 1.0 + (float(np.max(np.abs(b))) if m else 0.0)
    best_val = None
    best_x = None

    if rank == 0:
        # A is (numerically) zero: x = 0 is the only candidate vertex
        if m == 0 or float(np.max(np.abs(b))) <= feas_tol * scale:
            best_val = 0.0
            best_x = np.zeros(n)
    else:
        for subset in combinations(range(n), rank):
            As = dense[:, subset]
            sol, res, *_ = np.linalg.lstsq(As, b, rcond=None)
            if float(np.max(np.abs(As @ sol - b))) > feas_tol * scale:
                continue
            if sol.size and float(sol.min()) < -feas_tol:
                continue
            x = np.zeros(n)
            x[list(subset)] = np.clip(sol, 0.0, None)
            val = float(lp.c @ x)
            if best_val is None or val < best_val - 1e-12:
                best_val = val
                best_x = x

    if best_x is None:
        return OracleResult(status=STATUS_INFEASIBLE)

    ray = _find_negative_ray(dense, lp.c, rank)
    if ray is not None:
        return OracleResult(status=STATUS_UNBOUNDED)
    return OracleResult(status=STATUS_OPTIMAL, optimum=best_val, vertex=best_x)


def _find_negative_ray(dense, c, rank, tol=1e-10):
    """Minimal-support recession direction with negative cost, if any.

    Extreme rays of {d >= 0 : Ad = 0} have minimal support, on which the
    column submatrix has nullity exactly one; it suffices to scan subsets
    of size up to rank+1 for one-signed null vectors.
    """
    m, n = dense.shape
    for size in range(1, min(n, rank + 1) + 1):
        for subset in combinations(range(n), size):
            As = dense[:, subset]
            _, s, vt = np.linalg.svd(As)
            null_dim = int(np.sum(s <= tol * max(1.0, s[0] if s.size else 0.0)))
            null_dim += max(0, size - len(s))
            if null_dim != 1:
                continue
            v = vt[-1]
            if np.all(v >= -tol) or np.all(v <= tol):
                d = np.abs(v)
                if float(np.max(d)) <= tol:
                    continue
                d = d / float(np.max(d))
                if float(np.asarray(c)[list(subset)] @ d) < -1e-9:
                    return subset, d
    return None
