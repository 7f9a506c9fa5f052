"""Quadratic assignment instances and their pairwise LP linearization.

The linearization introduces one variable per unordered pair of distinct
assignments {(i,j), (k,l)} with i != k and j != l (the symmetric
identification y[i,j,k,l] = y[k,l,i,j], which halves the pair count), tied
to the assignment variables through

    sum_{j != l} y[i,j,k,l] = x[k,l]   for every (k,l) and every i != k,
    sum_{i != k} y[i,j,k,l] = x[k,l]   for every (k,l) and every j != l,

on top of the 2n assignment equalities.  Dimensions are therefore

    rows    = 2n + 2 n^2 (n-1)
    columns = n^2 + n^2 (n-1)^2 / 2.

The constraint system above is reverse-engineered from the published
dimension table for the Nugent instances, which it reproduces exactly; no
authoritative statement of the row system was available.
"""

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Tuple

import numpy as np

from .errors import DimensionError, ModelError, QapParseError
from .model import SparseColMatrix, StandardFormLP


@dataclass
class QapInstance:
    """Size n with an n x n flow matrix F and distance matrix D (the two
    matrices of a QAPLIB .dat file, in file order)."""

    n: int
    F: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        self.F = np.asarray(self.F, dtype=np.float64)
        self.D = np.asarray(self.D, dtype=np.float64)
        if self.F.shape != (self.n, self.n):
            raise DimensionError(
                f"flow matrix has shape {self.F.shape}, expected "
                f"({self.n}, {self.n})")
        if self.D.shape != (self.n, self.n):
            raise DimensionError(
                f"distance matrix has shape {self.D.shape}, expected "
                f"({self.n}, {self.n})")


def parse_qaplib(text) -> QapInstance:
    """Parse QAPLIB .dat layout: n, then two n x n matrices row-major,
    whitespace-separated."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    tokens = text.split()
    if not tokens:
        raise QapParseError("empty input", 1)
    values = []
    for pos, tok in enumerate(tokens, start=1):
        try:
            values.append(float(tok))
        except ValueError:
            raise QapParseError(f"non-numeric token {tok!r}", pos) from None
    n = int(values[0])
    if n < 1 or values[0] != n:
        raise QapParseError(f"size must be a positive integer, got {values[0]}", 1)
    expected = 1 + 2 * n * n
    if len(values) != expected:
        raise QapParseError(
            f"expected {expected} tokens for n = {n}, got {len(values)}",
            len(values))
    F = np.array(values[1:1 + n * n]).reshape(n, n)
    D = np.array(values[1 + n * n:]).reshape(n, n)
    return QapInstance(n=n, F=F, D=D)


def parse_qaplib_file(path) -> QapInstance:
    with open(path, "r", encoding="ascii") as fh:
        return parse_qaplib(fh.read())


def aj_dimensions(n) -> Tuple[int, int]:
    """Closed-form (rows, columns) of the linearization."""
    return 2 * n + 2 * n * n * (n - 1), n * n + (n * n * (n - 1) ** 2) // 2


def _canonical_pairs(n):
    """Unordered assignment pairs in lexicographic order of the canonical
    representative (i,j,k,l) with (i,j) < (k,l), i != k, j != l."""
    out = []
    for i in range(n):
        for j in range(n):
            for k in range(i + 1, n):  # (i,j) < (k,l) and i != k imply k > i
                for l in range(n):
                    if l != j:
                        out.append((i, j, k, l))
    return out


def aj_linearize(q: QapInstance) -> StandardFormLP:
    """Build the linearization as a standard-form LP.

    Column order: the n^2 assignment variables x[i,j] lexicographically,
    then the merged pair variables by canonical index.  The objective
    coefficient on y[i,j,k,l] is F[i,k] D[j,l] + F[k,i] D[l,j]; assignment
    variables carry zero cost.
    """
    n = q.n
    if n < 2:
        raise ModelError(f"linearization needs n >= 2, got n = {n}")
    n_rows, n_cols = aj_dimensions(n)
    nx = n * n
    pairs = _canonical_pairs(n)
    assert len(pairs) == n_cols - nx

    link_a_base = 2 * n
    link_b_base = 2 * n + n * n * (n - 1)

    def row_a(k, l, i):
        return link_a_base + (k * n + l) * (n - 1) + (i if i < k else i - 1)

    def row_b(k, l, j):
        return link_b_base + (k * n + l) * (n - 1) + (j if j < l else j - 1)

    indptr = np.zeros(n_cols + 1, dtype=np.int64)
    col_rows = []
    cost = np.zeros(n_cols)

    for i in range(n):
        for j in range(n):
            rows = [j, n + i]
            rows.extend(row_a(i, j, t) for t in range(n) if t != i)
            rows.extend(row_b(i, j, t) for t in range(n) if t != j)
            col_rows.append(sorted(rows))
    for t, (i, j, k, l) in enumerate(pairs):
        rows = [row_a(k, l, i), row_a(i, j, k), row_b(k, l, j), row_b(i, j, l)]
        col_rows.append(sorted(rows))
        cost[nx + t] = q.F[i, k] * q.D[j, l] + q.F[k, i] * q.D[l, j]

    nnz = sum(len(rows) for rows in col_rows)
    indices = np.empty(nnz, dtype=np.int64)
    data = np.empty(nnz, dtype=np.float64)
    pos = 0
    for c, rows in enumerate(col_rows):
        indptr[c + 1] = indptr[c] + len(rows)
        for r in rows:
            indices[pos] = r
            # assignment columns get -1 in their linking rows, +1 elsewhere
            data[pos] = -1.0 if (c < nx and r >= link_a_base) else 1.0
            pos += 1

    b = np.zeros(n_rows)
    b[:2 * n] = 1.0

    row_names = [f"LOC{j + 1}" for j in range(n)]
    row_names += [f"FAC{i + 1}" for i in range(n)]
    for k in range(n):
        for l in range(n):
            row_names += [f"LA_{k + 1}_{l + 1}_{i + 1}"
                          for i in range(n) if i != k]
    for k in range(n):
        for l in range(n):
            row_names += [f"LB_{k + 1}_{l + 1}_{j + 1}"
                          for j in range(n) if j != l]
    col_names = [f"X_{i + 1}_{j + 1}" for i in range(n) for j in range(n)]
    col_names += [f"Y_{i + 1}_{j + 1}_{k + 1}_{l + 1}" for (i, j, k, l) in pairs]

    A = SparseColMatrix(n_rows, n_cols, indptr, indices, data,
                        _skip_checks=True)
    return StandardFormLP(cost, A, b, row_names=row_names,
                          col_names=col_names,
                          name=f"QAPLIN{n}")


def assignment_vector(q: QapInstance, perm) -> np.ndarray:
    """Feasible point of the linearization for a permutation: x[i, perm_i]
    one-hot, pair variables set to the consistent products."""
    n = q.n
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ModelError(f"not a permutation of 0..{n - 1}: {perm}")
    _, n_cols = aj_dimensions(n)
    out = np.zeros(n_cols)
    for i in range(n):
        out[i * n + perm[i]] = 1.0
    for t, (i, j, k, l) in enumerate(_canonical_pairs(n)):
        if perm[i] == j and perm[k] == l:
            out[n * n + t] = 1.0
    return out


def permutation_cost(q: QapInstance, perm) -> float:
    """Quadratic assignment cost sum_{i,k} F[i,k] D[perm_i, perm_k]."""
    p = np.asarray(list(perm), dtype=np.int64)
    return float((q.F * q.D[np.ix_(p, p)]).sum())


def brute_force_qap_optimum(q: QapInstance, max_n=9):
    """Exhaustive permutation minimum (guard: n <= max_n)."""
    if q.n > max_n:
        raise ModelError(f"exhaustive search capped at n = {max_n}")
    best_val = math.inf
    best_perm = None
    for perm in permutations(range(q.n)):
        v = permutation_cost(q, perm)
        if v < best_val:
            best_val = v
            best_perm = perm
    return best_val, best_perm


@dataclass
class DualMap:
    """Bookkeeping for a dualized LP: how to read multipliers and the
    objective back in terms of the primal."""

    n_primal_rows: int
    n_primal_cols: int

    def multipliers(self, z):
        z = np.asarray(z, dtype=np.float64)
        m = self.n_primal_rows
        return z[:m] - z[m:2 * m]

    def objective_from_standard(self, value):
        """Dual objective b'y from the minimized standard-form value."""
        return -float(value)


def dualize(lp: StandardFormLP):
    """Standard-form LP for the dual  max b'y  s.t.  A'y <= c, y free.

    Negating to minimize, splitting y = y+ - y- and adding slacks yields
    an LP with n rows and 2m + n columns.  By strong duality the new LP's
    optimum is the negative of the primal optimum (see DualMap).
    """
    m, n = lp.shape
    entries = []
    for j in range(lp.A.n_cols):
        idx, vals = lp.A.col(j)
        for i, v in zip(idx, vals):
            entries.append((j, int(i), float(v)))           # A' y+
            entries.append((j, m + int(i), -float(v)))      # -A' y-
    for j in range(n):
        entries.append((j, 2 * m + j, 1.0))                 # slacks
    A = SparseColMatrix.from_triplets(n, 2 * m + n, entries)
    c = np.concatenate([-lp.b, lp.b, np.zeros(n)])
    b = lp.c.copy()
    prow = lp.row_names if lp.row_names is not None else \
        [f"R{i + 1}" for i in range(m)]
    pcol = lp.col_names if lp.col_names is not None else \
        [f"C{j + 1}" for j in range(n)]
    col_names = [f"YP_{rn}" for rn in prow] + [f"YN_{rn}" for rn in prow] \
        + [f"DS_{cn}" for cn in pcol]
    row_names = [f"D_{cn}" for cn in pcol]
    dual = StandardFormLP(c, A, b, row_names=row_names, col_names=col_names,
                          name=f"DUAL_{lp.name or 'LP'}")
    return dual, DualMap(n_primal_rows=m, n_primal_cols=n)
