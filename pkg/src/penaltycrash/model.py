"""Standard-form LP model: sparse column-major matrix, residual and
objective measures, and the per-iteration trace schema.

The LP is  min c'x  subject to  Ax = b, x >= 0.  All storage is
column-major because the solver's inner loop touches one column per
coordinate update; a row-major view is never needed.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DimensionError, ParameterError


class SparseColMatrix:
    """Compressed column-wise matrix (CSC).

    Within each column, row indices are strictly increasing and explicit
    zeros are not stored.  Column squared norms are cached on first use
    because the coordinate solver reads them on every step.
    """

    def __init__(self, n_rows, n_cols, indptr, indices, data, _skip_checks=False):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.data = np.ascontiguousarray(data, dtype=np.float64)
        self._colsq = None
        if not _skip_checks:
            self._check_structure()

    def _check_structure(self):
        if self.n_rows < 0 or self.n_cols < 0:
            raise DimensionError("matrix dimensions must be nonnegative")
        if self.indptr.shape != (self.n_cols + 1,):
            raise DimensionError(
                f"indptr has length {self.indptr.shape[0]}, "
                f"expected n_cols+1 = {self.n_cols + 1}")
        if self.indptr[0] != 0 or self.indptr[-1] != self.indices.shape[0]:
            raise DimensionError("indptr does not span the stored entries")
        if self.indices.shape != self.data.shape:
            raise DimensionError(
                f"stored coefficient count {self.data.shape[0]} does not "
                f"match index count {self.indices.shape[0]}")
        if np.any(np.diff(self.indptr) < 0):
            raise DimensionError("indptr must be nondecreasing")
        if self.data.shape[0]:
            if self.indices.min() < 0 or self.indices.max() >= self.n_rows:
                raise DimensionError(
                    f"row index out of range [0, {self.n_rows})")
            if np.any(self.data == 0.0):
                raise ValueError("explicit zeros are not storable")
        for j in range(self.n_cols):
            col = self.indices[self.indptr[j]:self.indptr[j + 1]]
            if col.shape[0] > 1 and np.any(np.diff(col) <= 0):
                raise ValueError(
                    f"row indices in column {j} must be strictly increasing")

    @classmethod
    def from_triplets(cls, n_rows, n_cols, entries):
        """Build from (row, col, value) triplets.

        Zero values are dropped; duplicate (row, col) pairs are an error.
        """
        kept = [(int(i), int(j), float(v)) for (i, j, v) in entries if v != 0.0]
        for i, j, _ in kept:
            if not (0 <= i < n_rows):
                raise DimensionError(f"row index {i} out of range [0, {n_rows})")
            if not (0 <= j < n_cols):
                raise DimensionError(f"column index {j} out of range [0, {n_cols})")
        kept.sort(key=lambda e: (e[1], e[0]))
        for a, b in zip(kept, kept[1:]):
            if a[0] == b[0] and a[1] == b[1]:
                raise ValueError(f"duplicate entry at row {a[0]}, column {a[1]}")
        indptr = np.zeros(n_cols + 1, dtype=np.int64)
        for _, j, _ in kept:
            indptr[j + 1] += 1
        np.cumsum(indptr, out=indptr)
        indices = np.fromiter((e[0] for e in kept), dtype=np.int64, count=len(kept))
        data = np.fromiter((e[2] for e in kept), dtype=np.float64, count=len(kept))
        return cls(n_rows, n_cols, indptr, indices, data, _skip_checks=True)

    @classmethod
    def from_dense(cls, arr):
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionError("dense input must be 2-D")
        m, n = arr.shape
        entries = [(i, j, arr[i, j]) for j in range(n) for i in range(m)
                   if arr[i, j] != 0.0]
        return cls.from_triplets(m, n, entries)

    @classmethod
    def identity(cls, n):
        return cls.from_triplets(n, n, [(i, i, 1.0) for i in range(n)])

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return int(self.data.shape[0])

    @property
    def col_sq_norms(self):
        if self._colsq is None:
            self._colsq = _kernels.col_sq_norms(self.indptr, self.data)
        return self._colsq

    def col(self, j):
        """Row indices and values of column j."""
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def matvec(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_cols,):
            raise DimensionError(
                f"x has length {x.shape[0] if x.ndim == 1 else x.shape}, "
                f"expected n_cols = {self.n_cols}")
        return _kernels.matvec(self.indptr, self.indices, self.data, x,
                               self.n_rows)

    def rmatvec(self, y):
        y = np.asarray(y, dtype=np.float64)
        if y.shape != (self.n_rows,):
            raise DimensionError(
                f"y has length {y.shape[0] if y.ndim == 1 else y.shape}, "
                f"expected n_rows = {self.n_rows}")
        return _kernels.rmatvec(self.indptr, self.indices, self.data, y)

    def transpose(self):
        entries = []
        for j in range(self.n_cols):
            idx, vals = self.col(j)
            entries.extend((j, int(i), float(v)) for i, v in zip(idx, vals))
        return SparseColMatrix.from_triplets(self.n_cols, self.n_rows, entries)

    def to_dense(self):
        out = np.zeros(self.shape)
        for j in range(self.n_cols):
            idx, vals = self.col(j)
            out[idx, j] = vals
        return out

    def validate_cache(self, rel_tol=1e-12):
        """Re-derive the squared-norm cache and compare (returns max
        relative deviation)."""
        if self._colsq is None:
            return 0.0
        fresh = _kernels.col_sq_norms(self.indptr, self.data)
        denom = np.maximum(np.abs(fresh), 1.0)
        dev = float(np.max(np.abs(self._colsq - fresh) / denom)) if self.n_cols else 0.0
        if dev > rel_tol:
            raise ValueError(f"squared-norm cache off by {dev:.3e} relative")
        return dev

    def structurally_equal(self, other):
        return (self.shape == other.shape
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.data, other.data))


class StandardFormLP:
    """min c'x  s.t.  Ax = b, x >= 0.

    m < n is the common case but is not required.  Instances are immutable
    by convention: solvers never write into an LP, so any number of
    read-only evaluations may share one.
    """

    def __init__(self, c, A, b, row_names=None, col_names=None,
                 objective_name=None, name=None):
        self.c = np.ascontiguousarray(c, dtype=np.float64)
        self.A = A
        self.b = np.ascontiguousarray(b, dtype=np.float64)
        if self.c.shape != (A.n_cols,):
            raise DimensionError(
                f"c has length {self.c.shape[0] if self.c.ndim == 1 else self.c.shape},"
                f" expected A.n_cols = {A.n_cols}")
        if self.b.shape != (A.n_rows,):
            raise DimensionError(
                f"b has length {self.b.shape[0] if self.b.ndim == 1 else self.b.shape},"
                f" expected A.n_rows = {A.n_rows}")
        if row_names is not None and len(row_names) != A.n_rows:
            raise DimensionError("row_names length does not match n_rows")
        if col_names is not None and len(col_names) != A.n_cols:
            raise DimensionError("col_names length does not match n_cols")
        self.row_names = list(row_names) if row_names is not None else None
        self.col_names = list(col_names) if col_names is not None else None
        self.objective_name = objective_name
        self.name = name

    @property
    def n_rows(self):
        return self.A.n_rows

    @property
    def n_cols(self):
        return self.A.n_cols

    @property
    def shape(self):
        return self.A.shape

    def objective(self, x):
        x = _check_point(self, x)
        return float(self.c @ x)


def _check_point(lp, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (lp.n_cols,):
        raise DimensionError(
            f"x has length {x.shape[0] if x.ndim == 1 else x.shape}, "
            f"expected n = {lp.n_cols}")
    return x


def _check_multipliers(lp, lam):
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape != (lp.n_rows,):
        raise DimensionError(
            f"lambda has length {lam.shape[0] if lam.ndim == 1 else lam.shape},"
            f" expected m = {lp.n_rows}")
    return lam


def compute_residual(lp, x):
    """r(x) = Ax - b, one matrix-vector product plus a subtraction."""
    x = _check_point(lp, x)
    return lp.A.matvec(x) - lp.b


def idiot_objective(lp, x, lam, mu):
    """h(x) = c'x + lambda' r(x) + r(x)' r(x) / (2 mu)."""
    if mu <= 0.0:
        raise ParameterError(f"mu must be positive, got {mu}")
    x = _check_point(lp, x)
    lam = _check_multipliers(lp, lam)
    r = compute_residual(lp, x)
    return float(lp.c @ x + lam @ r + (r @ r) / (2.0 * mu))


def idiot_objective_expanded(lp, x, lam, mu):
    """Diagnostic evaluation of h through its fully expanded quadratic:

        x'A'Ax/(2 mu) + (c' + lambda'A - b'A/mu) x - lambda'b + b'b/(2 mu)

    computed without forming the residual, so it is an independent check
    of :func:`idiot_objective` (agreement to 1e-9 relative is asserted by
    the test suite).
    """
    if mu <= 0.0:
        raise ParameterError(f"mu must be positive, got {mu}")
    x = _check_point(lp, x)
    lam = _check_multipliers(lp, lam)
    w = lp.A.matvec(x)
    at_lam = lp.A.rmatvec(lam)
    at_b = lp.A.rmatvec(lp.b)
    quad = (w @ w) / (2.0 * mu)
    lin = float((lp.c + at_lam - at_b / mu) @ x)
    const = float(-(lam @ lp.b) + (lp.b @ lp.b) / (2.0 * mu))
    return float(quad + lin + const)


#: (f - f*) / max(1, |f*|): gap relative to the reference optimum with the
#: denominator floored at one.
ERROR_GUARDED_GAP = "guarded_gap"
#: (f* - f) / f: reference-minus-achieved, relative to the achieved value.
ERROR_REVERSE_RELATIVE = "reverse_relative"

_ERROR_CONVENTIONS = (ERROR_GUARDED_GAP, ERROR_REVERSE_RELATIVE)


def objective_error(f, f_star, convention=ERROR_GUARDED_GAP):
    """Relative closeness of an achieved objective f to a reference f*."""
    f = float(f)
    f_star = float(f_star)
    if not np.isfinite(f_star):
        raise ParameterError(f"reference optimum must be finite, got {f_star}")
    if convention == ERROR_GUARDED_GAP:
        return (f - f_star) / max(1.0, abs(f_star))
    if convention == ERROR_REVERSE_RELATIVE:
        if f == 0.0:
            raise ZeroDivisionError(
                "reverse_relative objective error undefined for f = 0")
        return (f_star - f) / f
    raise ParameterError(
        f"unknown convention {convention!r}; expected one of {_ERROR_CONVENTIONS}")


@dataclass
class SolutionReport:
    """Summary of a solver run."""

    residual_norm: float
    objective: float
    iterations: int
    elapsed: float
    objective_error_guarded: Optional[float] = None
    objective_error_reverse: Optional[float] = None

    def __post_init__(self):
        if self.residual_norm < 0.0:
            raise ParameterError("residual norm cannot be negative")


def make_report(lp, x, iterations, elapsed, f_star=None):
    r = compute_residual(lp, x)
    f = float(lp.c @ x)
    eg = er = None
    if f_star is not None:
        eg = objective_error(f, f_star, ERROR_GUARDED_GAP)
        if f != 0.0:
            er = objective_error(f, f_star, ERROR_REVERSE_RELATIVE)
    return SolutionReport(residual_norm=float(np.linalg.norm(r)), objective=f,
                          iterations=iterations, elapsed=elapsed,
                          objective_error_guarded=eg,
                          objective_error_reverse=er)


TRACE_FIELDS = ("iter", "mu", "lambda_norm", "residual_norm", "objective",
                "h_value")


@dataclass
class TraceRow:
    """One outer iteration of a solver run."""

    iter: int
    mu: float
    lambda_norm: float
    residual_norm: float
    objective: float
    h_value: float

    def csv_values(self):
        # repr(float) is the shortest decimal that round-trips exactly
        return (str(self.iter), repr(float(self.mu)),
                repr(float(self.lambda_norm)), repr(float(self.residual_norm)),
                repr(float(self.objective)), repr(float(self.h_value)))


def write_trace(rows, fh, mode=None):
    """Write trace rows as CSV.  The header row is always emitted; when
    ``mode`` is given an extra trailing column carries it on every row."""
    fields = TRACE_FIELDS + ("mode",) if mode is not None else TRACE_FIELDS
    fh.write(",".join(fields) + "\n")
    for row in rows:
        vals = row.csv_values()
        if mode is not None:
            vals = vals + (mode,)
        fh.write(",".join(vals) + "\n")


def write_trace_file(rows, path, mode=None):
    with open(path, "w", encoding="ascii") as fh:
        write_trace(rows, fh, mode=mode)
