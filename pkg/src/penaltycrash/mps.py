"""MPS reading/writing and reduction of general LPs to standard form.

Free-format MPS (whitespace-delimited) is accepted; fixed column positions
are not enforced since every target file is machine-generated.  Supported
sections: NAME, ROWS, COLUMNS, RHS, RANGES, BOUNDS, ENDATA.
"""

import warnings
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import DimensionError, ModelError, MpsParseError, MpsWarning
from .model import SparseColMatrix, StandardFormLP

ROW_EQ = "E"
ROW_LE = "L"
ROW_GE = "G"
ROW_FREE = "N"

SENSE_MIN = "min"
SENSE_MAX = "max"

_INF = float("inf")


@dataclass
class GeneralLP:
    """LP as modeled: typed rows, bounded columns, explicit names."""

    name: Optional[str] = None
    sense: str = SENSE_MIN
    objective_name: str = "OBJ"
    row_names: List[str] = field(default_factory=list)
    row_types: List[str] = field(default_factory=list)
    rhs: List[float] = field(default_factory=list)
    ranges: List[Optional[float]] = field(default_factory=list)
    col_names: List[str] = field(default_factory=list)
    col_lower: List[float] = field(default_factory=list)
    col_upper: List[float] = field(default_factory=list)
    obj_coeffs: List[float] = field(default_factory=list)
    entries: List[Tuple[int, int, float]] = field(default_factory=list)

    @property
    def n_rows(self):
        return len(self.row_names)

    @property
    def n_cols(self):
        return len(self.col_names)

    def add_row(self, name, row_type, rhs=0.0):
        self.row_names.append(name)
        self.row_types.append(row_type)
        self.rhs.append(rhs)
        self.ranges.append(None)
        return len(self.row_names) - 1

    def add_col(self, name, obj=0.0, lower=0.0, upper=_INF):
        self.col_names.append(name)
        self.obj_coeffs.append(obj)
        self.col_lower.append(lower)
        self.col_upper.append(upper)
        return len(self.col_names) - 1

    def add_entry(self, row, col, value):
        if not (0 <= row < self.n_rows):
            raise ModelError(f"entry references undeclared row {row}")
        if not (0 <= col < self.n_cols):
            raise ModelError(f"entry references undeclared column {col}")
        self.entries.append((row, col, float(value)))

    def validate(self):
        for i, (lo, up) in enumerate(zip(self.col_lower, self.col_upper)):
            if lo > up:
                raise ModelError(
                    f"column {self.col_names[i]!r} has crossed bounds "
                    f"[{lo}, {up}]")
        for r, c, _ in self.entries:
            if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
                raise ModelError("entry references undeclared row or column")
        return self

    def objective_value(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_cols,):
            raise DimensionError(
                f"x has length {x.shape}, expected {self.n_cols}")
        return float(np.asarray(self.obj_coeffs) @ x)


# --------------------------------------------------------------------------
# parsing

_SECTIONS = ("NAME", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA",
             "OBJSENSE")
_BOUND_TYPES_VALUED = ("LO", "UP", "FX")
_BOUND_TYPES_FLAG = ("FR", "MI", "PL")


def parse_mps(text) -> GeneralLP:
    """Parse free-format MPS text into a GeneralLP.

    Default column bounds are [0, +inf); the objective sense defaults to
    minimize.  Errors carry the 1-based line number.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    g = GeneralLP()
    row_index: Dict[str, int] = {}
    col_index: Dict[str, int] = {}
    seen_entries = set()
    objective_seen = False
    section = None
    ended = False
    lineno = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("*"):
            continue
        stripped = raw.strip()
        if not stripped:
            continue
        is_header = not raw[0].isspace()
        fields = stripped.split()
        if is_header:
            keyword = fields[0].upper()
            if keyword == "ENDATA":
                ended = True
                break
            if keyword == "NAME":
                g.name = fields[1] if len(fields) > 1 else None
                section = "NAME"
                continue
            if keyword not in _SECTIONS:
                raise MpsParseError(f"unknown section {fields[0]!r}", lineno)
            if keyword == "OBJSENSE":
                raise MpsParseError("OBJSENSE section is not supported", lineno)
            section = keyword
            continue

        if section == "ROWS":
            if len(fields) != 2:
                raise MpsParseError("ROWS line must be '<type> <name>'", lineno)
            rtype, rname = fields[0].upper(), fields[1]
            if rtype not in (ROW_EQ, ROW_LE, ROW_GE, ROW_FREE):
                raise MpsParseError(f"unknown row type {fields[0]!r}", lineno)
            if rname in row_index or rname == g.objective_name and objective_seen:
                raise MpsParseError(f"duplicate row name {rname!r}", lineno)
            if rtype == ROW_FREE and not objective_seen:
                g.objective_name = rname
                objective_seen = True
                continue
            row_index[rname] = g.add_row(rname, rtype)
        elif section == "COLUMNS":
            if len(fields) >= 3 and fields[1] == "'MARKER'":
                warnings.warn("integrality markers ignored; variables are "
                              "treated as continuous", MpsWarning)
                continue
            if len(fields) < 3 or len(fields) % 2 == 0:
                raise MpsParseError(
                    "COLUMNS line must be '<col> (<row> <value>)+'", lineno)
            cname = fields[0]
            if cname not in col_index:
                col_index[cname] = g.add_col(cname)
            col = col_index[cname]
            for k in range(1, len(fields), 2):
                rname, value = fields[k], _number(fields[k + 1], lineno)
                if rname == g.objective_name and objective_seen:
                    g.obj_coeffs[col] = value
                    continue
                if rname not in row_index:
                    raise MpsParseError(
                        f"coefficient on undeclared row {rname!r}", lineno)
                key = (row_index[rname], col)
                if key in seen_entries:
                    raise MpsParseError(
                        f"duplicate coefficient for row {rname!r}, "
                        f"column {cname!r}", lineno)
                seen_entries.add(key)
                if value != 0.0:
                    g.entries.append((key[0], key[1], value))
        elif section == "RHS":
            if len(fields) < 3 or len(fields) % 2 == 0:
                raise MpsParseError(
                    "RHS line must be '<set> (<row> <value>)+'", lineno)
            for k in range(1, len(fields), 2):
                rname, value = fields[k], _number(fields[k + 1], lineno)
                if rname == g.objective_name and objective_seen:
                    warnings.warn("objective constant in RHS ignored",
                                  MpsWarning)
                    continue
                if rname not in row_index:
                    raise MpsParseError(
                        f"RHS for undeclared row {rname!r}", lineno)
                g.rhs[row_index[rname]] = value
        elif section == "RANGES":
            if len(fields) < 3 or len(fields) % 2 == 0:
                raise MpsParseError(
                    "RANGES line must be '<set> (<row> <value>)+'", lineno)
            for k in range(1, len(fields), 2):
                rname, value = fields[k], _number(fields[k + 1], lineno)
                if rname not in row_index:
                    raise MpsParseError(
                        f"RANGES for undeclared row {rname!r}", lineno)
                g.ranges[row_index[rname]] = value
        elif section == "BOUNDS":
            btype = fields[0].upper()
            if btype in _BOUND_TYPES_VALUED:
                if len(fields) != 4:
                    raise MpsParseError(
                        f"{btype} bound needs '<type> <set> <col> <value>'",
                        lineno)
                cname, value = fields[2], _number(fields[3], lineno)
            elif btype in _BOUND_TYPES_FLAG:
                if len(fields) != 3:
                    raise MpsParseError(
                        f"{btype} bound needs '<type> <set> <col>'", lineno)
                cname, value = fields[2], None
            else:
                raise MpsParseError(f"unsupported bound type {fields[0]!r}",
                                    lineno)
            if cname not in col_index:
                raise MpsParseError(
                    f"bound on undeclared column {cname!r}", lineno)
            col = col_index[cname]
            if btype == "LO":
                g.col_lower[col] = value
            elif btype == "UP":
                g.col_upper[col] = value
            elif btype == "FX":
                g.col_lower[col] = value
                g.col_upper[col] = value
            elif btype == "FR":
                g.col_lower[col] = -_INF
                g.col_upper[col] = _INF
            elif btype == "MI":
                g.col_lower[col] = -_INF
            elif btype == "PL":
                g.col_upper[col] = _INF
        elif section in (None, "NAME"):
            raise MpsParseError("data before any section header", lineno)
        else:  # pragma: no cover - sections list is closed above
            raise MpsParseError(f"unhandled section {section}", lineno)

    if not ended:
        raise MpsParseError("missing ENDATA", lineno)
    return g


def _number(token, lineno):
    try:
        return float(token)
    except ValueError:
        raise MpsParseError(f"expected a number, got {token!r}", lineno) from None


def parse_mps_file(path) -> GeneralLP:
    with open(path, "r", encoding="ascii") as fh:
        return parse_mps(fh.read())


# --------------------------------------------------------------------------
# standard-form reduction

KIND_SHIFT = "shift"
KIND_NEGATE = "negate"
KIND_SPLIT = "split"


@dataclass
class VariableMap:
    """Recovers original-variable values from a standard-form point.

    ``entries[j]`` describes original variable j: ("shift", col, offset)
    means x_j = z_col + offset; ("negate", col, offset) means
    x_j = offset - z_col; ("split", pos, neg) means x_j = z_pos - z_neg.
    """

    entries: List[tuple]
    n_standard: int
    objective_sign: float = 1.0

    def original_point(self, z):
        z = np.asarray(z, dtype=np.float64)
        if z.shape != (self.n_standard,):
            raise DimensionError(
                f"z has length {z.shape}, expected {self.n_standard}")
        out = np.empty(len(self.entries))
        for j, entry in enumerate(self.entries):
            kind = entry[0]
            if kind == KIND_SHIFT:
                out[j] = z[entry[1]] + entry[2]
            elif kind == KIND_NEGATE:
                out[j] = entry[2] - z[entry[1]]
            else:
                out[j] = z[entry[1]] - z[entry[2]]
        return out


def _row_interval(row_type, rhs, range_value):
    """Two-sided activity interval [lo, hi] for a typed row with optional
    RANGES modifier, per the MPS convention."""
    if row_type == ROW_EQ:
        lo = hi = rhs
        if range_value is not None:
            if range_value >= 0.0:
                hi = rhs + range_value
            else:
                lo = rhs + range_value
    elif row_type == ROW_LE:
        lo, hi = -_INF, rhs
        if range_value is not None:
            lo = rhs - abs(range_value)
    elif row_type == ROW_GE:
        lo, hi = rhs, _INF
        if range_value is not None:
            hi = rhs + abs(range_value)
    else:  # free row
        lo, hi = -_INF, _INF
    return lo, hi


def to_standard_form(g: GeneralLP):
    """Reduce a general LP to  min c'z, Az = b, z >= 0.

    Inequality rows gain slack columns; bounded variables are shifted so
    the lower bound is zero; finite upper bounds become explicit rows with
    their own slacks; free variables split into positive/negative parts.
    Returns the standard LP and the VariableMap back to original variables.
    """
    g.validate()

    # rows -> activity intervals; free rows drop out
    kept_rows = []
    intervals = []
    for i in range(g.n_rows):
        lo, hi = _row_interval(g.row_types[i], g.rhs[i], g.ranges[i])
        if lo == -_INF and hi == _INF:
            continue
        kept_rows.append(i)
        intervals.append((lo, hi))
    row_of = {orig: new for new, orig in enumerate(kept_rows)}
    n_core_rows = len(kept_rows)

    obj_sign = -1.0 if g.sense == SENSE_MAX else 1.0

    # working variable list: originals then row slacks
    #   each: (name, lower, upper, cost, [(core_row, coeff), ...])
    per_col_entries = [[] for _ in range(g.n_cols)]
    for r, c, v in g.entries:
        if r in row_of:
            per_col_entries[c].append((row_of[r], v))
    variables = []
    for j in range(g.n_cols):
        variables.append([g.col_names[j], g.col_lower[j], g.col_upper[j],
                          obj_sign * g.obj_coeffs[j], per_col_entries[j]])

    b = np.zeros(n_core_rows)
    for new, (lo, hi) in enumerate(intervals):
        if lo == hi:
            b[new] = lo
        elif hi < _INF and lo == -_INF:
            b[new] = hi
            variables.append([f"SLK{new + 1:04d}", 0.0, _INF, 0.0,
                              [(new, 1.0)]])
        elif lo > -_INF and hi == _INF:
            b[new] = lo
            variables.append([f"SLK{new + 1:04d}", 0.0, _INF, 0.0,
                              [(new, -1.0)]])
        else:  # two-sided: slack bounded above by the row width
            b[new] = hi
            variables.append([f"SLK{new + 1:04d}", 0.0, hi - lo, 0.0,
                              [(new, 1.0)]])

    # bound-normalize every variable
    std_names: List[str] = []
    std_cost: List[float] = []
    std_entries: List[Tuple[int, int, float]] = []  # (row, std_col, value)
    map_entries: List[tuple] = [None] * g.n_cols
    bound_rows: List[Tuple[int, float]] = []  # (std_col, width)
    b_adjust = np.zeros(n_core_rows)
    split_negatives = []  # (orig_col_index_or_None, cost, entries)

    def add_std_col(name, cost, entries):
        col = len(std_names)
        std_names.append(name)
        std_cost.append(cost)
        std_entries.extend((r, col, v) for r, v in entries)
        return col

    for idx, (name, lo, hi, cost, entries) in enumerate(variables):
        is_original = idx < g.n_cols
        if lo == -_INF and hi == _INF:
            col = add_std_col(name + "+", cost, entries)
            neg_entries = [(r, -v) for r, v in entries]
            split_negatives.append((idx if is_original else None, name + "-",
                                    -cost, neg_entries, col))
        elif lo == -_INF:  # upper bound only: x = hi - z
            for r, v in entries:
                b_adjust[r] += v * hi
            col = add_std_col(name, -cost, [(r, -v) for r, v in entries])
            if is_original:
                map_entries[idx] = (KIND_NEGATE, col, hi)
        else:
            if lo != 0.0:
                for r, v in entries:
                    b_adjust[r] += v * lo
            col = add_std_col(name, cost, entries)
            if is_original:
                map_entries[idx] = (KIND_SHIFT, col, lo)
            if hi < _INF:
                bound_rows.append((col, hi - lo))

    for orig_idx, neg_name, neg_cost, neg_entries, pos_col in split_negatives:
        col = add_std_col(neg_name, neg_cost, neg_entries)
        if orig_idx is not None:
            map_entries[orig_idx] = (KIND_SPLIT, pos_col, col)

    # explicit rows for finite upper bounds: z + s = width
    row_names = [g.row_names[i] for i in kept_rows]
    b_full = list(b - b_adjust)
    for col, width in bound_rows:
        row = len(row_names)
        row_names.append(f"UB_{std_names[col]}")
        b_full.append(width)
        std_entries.append((row, col, 1.0))
        slack_col = add_std_col(f"UBS_{std_names[col]}", 0.0, [])
        std_entries.append((row, slack_col, 1.0))

    n_std_rows = len(row_names)
    n_std_cols = len(std_names)
    A = SparseColMatrix.from_triplets(n_std_rows, n_std_cols, std_entries)
    lp = StandardFormLP(np.asarray(std_cost), A, np.asarray(b_full),
                        row_names=row_names, col_names=std_names,
                        objective_name=g.objective_name, name=g.name)
    vmap = VariableMap(entries=map_entries, n_standard=n_std_cols,
                       objective_sign=obj_sign)
    return lp, vmap


# --------------------------------------------------------------------------
# writing

def write_mps(lp: StandardFormLP) -> str:
    """Serialize a standard-form LP.  Values are written as the shortest
    decimal that round-trips, so parse(write(lp)) is exact."""
    m, n = lp.shape
    row_w = max(4, len(str(m)))
    col_w = max(4, len(str(n)))
    rows = lp.row_names if lp.row_names is not None else \
        [f"R{i + 1:0{row_w}d}" for i in range(m)]
    cols = lp.col_names if lp.col_names is not None else \
        [f"C{j + 1:0{col_w}d}" for j in range(n)]
    obj = lp.objective_name or "OBJ"

    out = [f"NAME          {lp.name or 'LP'}", "ROWS", f" N  {obj}"]
    out.extend(f" E  {rname}" for rname in rows)
    out.append("COLUMNS")
    for j in range(n):
        pairs = []
        if lp.c[j] != 0.0:
            pairs.append((obj, lp.c[j]))
        idx, vals = lp.A.col(j)
        pairs.extend((rows[i], v) for i, v in zip(idx, vals))
        if not pairs:  # declare empty columns so dimensions round-trip
            pairs.append((obj, 0.0))
        for k in range(0, len(pairs), 2):
            chunk = pairs[k:k + 2]
            parts = "  ".join(f"{rn}  {repr(float(v))}" for rn, v in chunk)
            out.append(f"    {cols[j]}  {parts}")
    out.append("RHS")
    for i in range(m):
        if lp.b[i] != 0.0:
            out.append(f"    RHS1  {rows[i]}  {repr(float(lp.b[i]))}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def write_mps_file(lp: StandardFormLP, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(write_mps(lp))


def standard_form_from_mps(text):
    """Convenience: parse MPS text and reduce to standard form."""
    g = parse_mps(text)
    lp, vmap = to_standard_form(g)
    return g, lp, vmap
