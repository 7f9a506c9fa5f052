"""Command-line front end.

Exit status contract: 0 success, 1 usage, 2 parse error, 3 crash abandoned
in its sample phase, 4 unbounded ray detected, 5 oracle size guard.
"""

import argparse
import sys
from dataclasses import fields as dataclass_fields
from pathlib import Path

import numpy as np

from . import crash, figures, studies
from .crash import IdiotConfig, run_idiot
from .errors import (ModelError, MpsParseError, OracleSizeError,
                     ParameterError, QapParseError, UnboundedRayError)
from .model import (ERROR_GUARDED_GAP, ERROR_REVERSE_RELATIVE,
                    objective_error, write_trace_file)
from .mps import parse_mps, parse_mps_file, to_standard_form, write_mps_file
from .oracle import solve_by_enumeration
from .qap import dualize, parse_qaplib_file, aj_linearize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_ABANDONED = 3
EXIT_UNBOUNDED = 4
EXIT_ORACLE_GUARD = 5


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract here
    reserves 2 for input parse errors, so remap to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


_CONFIG_FLAGS = [f.name for f in dataclass_fields(IdiotConfig)]


def _add_config_flags(parser):
    group = parser.add_argument_group(
        "solver configuration (mirrors the config-file field names)")
    group.add_argument("--config", metavar="FILE",
                       help="key=value file with IdiotConfig field names; "
                            "flags override the file")
    for name in _CONFIG_FLAGS:
        flag = "--" + name.replace("_", "-")
        group.add_argument(flag, dest=name, default=None, metavar="V")


def _build_config(args):
    if args.config:
        text = Path(args.config).read_text(encoding="ascii")
        cfg = IdiotConfig.from_key_value_text(text)
    else:
        cfg = IdiotConfig()
    for name in _CONFIG_FLAGS:
        raw = getattr(args, name, None)
        if raw is None:
            continue
        if name == "mu0":
            value = raw if raw == "auto" else float(raw)
        elif name in IdiotConfig._FLOAT_FIELDS:
            value = float(raw)
        else:
            value = int(raw)
        setattr(cfg, name, value)
    return cfg.validate()


def _read_general_lp(path):
    if path == "-":
        return parse_mps(sys.stdin.read())
    return parse_mps_file(path)


def build_parser():
    parser = _Parser(prog="penaltycrash",
                     description="Penalty-crash LP solver and study tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the crash on an MPS file")
    p_solve.add_argument("path", help="MPS file ('-' reads standard input)")
    p_solve.add_argument("--fstar", type=float, default=None,
                         help="reference optimum for the error report")
    p_solve.add_argument("--trace", metavar="CSV",
                         help="write the per-iteration trace here")
    p_solve.add_argument("--figure", metavar="PNG",
                         help="render the convergence figure here")
    _add_config_flags(p_solve)

    p_qapgen = sub.add_parser(
        "qapgen", help="linearize a QAPLIB instance to MPS")
    p_qapgen.add_argument("path", help="QAPLIB .dat file")
    p_qapgen.add_argument("-o", "--output", required=True, metavar="MPS")

    p_dual = sub.add_parser(
        "dualize", help="emit the standard-form dual of an MPS model")
    p_dual.add_argument("path", help="MPS file")
    p_dual.add_argument("-o", "--output", required=True, metavar="MPS")

    p_study = sub.add_parser("study", help="run a study suite")
    p_study.add_argument("suite", choices=["theorem1", "modes", "qap-dims"])
    p_study.add_argument("--seeds", type=int, default=None,
                         help="number of seeded instances (required for "
                              "theorem1; seeds are 0..N-1)")
    p_study.add_argument("--out", metavar="PATH",
                         help="CSV output (a directory for 'modes', one "
                              "file per mode)")
    p_study.add_argument("--figure", metavar="PNG",
                         help="render the study figure here")

    p_oracle = sub.add_parser(
        "oracle", help="solve a tiny MPS model by exhaustive enumeration")
    p_oracle.add_argument("path", help="MPS file")
    return parser


def cmd_solve(args):
    try:
        g = _read_general_lp(args.path)
        lp, vmap = to_standard_form(g)
    except (MpsParseError, ModelError, OSError) as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_PARSE
    cfg = _build_config(args)
    outcome = run_idiot(lp, cfg)
    if args.trace:
        write_trace_file(outcome.trace, args.trace)
    if args.figure and outcome.trace:
        figures.save_convergence_figure(outcome.trace, args.figure,
                                        title=g.name or args.path)
    x_orig = vmap.original_point(outcome.point)
    objective = g.objective_value(x_orig)
    print(f"status: {outcome.status}")
    print(f"iterations: {outcome.report.iterations}")
    print(f"elapsed: {outcome.report.elapsed:.3f}s")
    print(f"residual_norm: {repr(outcome.report.residual_norm)}")
    print(f"objective: {repr(objective)}")
    if args.fstar is not None:
        guarded = objective_error(objective, args.fstar, ERROR_GUARDED_GAP)
        print(f"objective_error_guarded_gap: {repr(guarded)}")
        if objective != 0.0:
            reverse = objective_error(objective, args.fstar,
                                      ERROR_REVERSE_RELATIVE)
            print(f"objective_error_reverse_relative: {repr(reverse)}")
        else:
            print("objective_error_reverse_relative: undefined (objective is 0)")
    if outcome.status == crash.STATUS_ABANDONED:
        return EXIT_ABANDONED
    if outcome.status == crash.STATUS_UNBOUNDED:
        return EXIT_UNBOUNDED
    return EXIT_OK


def cmd_qapgen(args):
    try:
        q = parse_qaplib_file(args.path)
        lp = aj_linearize(q)
    except (QapParseError, ModelError, OSError) as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_PARSE
    write_mps_file(lp, args.output)
    print(f"wrote {lp.n_rows} rows x {lp.n_cols} cols to {args.output}")
    return EXIT_OK


def cmd_dualize(args):
    try:
        g = _read_general_lp(args.path)
        lp, _ = to_standard_form(g)
    except (MpsParseError, ModelError, OSError) as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_PARSE
    dual, _ = dualize(lp)
    write_mps_file(dual, args.output)
    print(f"wrote dual with {dual.n_rows} rows x {dual.n_cols} cols "
          f"to {args.output}")
    return EXIT_OK


def cmd_study(args):
    if args.suite == "theorem1":
        if args.seeds is None:
            print("penaltycrash: study theorem1 requires --seeds",
                  file=sys.stderr)
            return EXIT_USAGE
        records = studies.theorem1_study(range(args.seeds))
        header = ("seed,m,n,oracle_optimum,final_objective,"
                  "final_residual_norm,objective_gap,worst_bound_violation")
        lines = [header]
        for rec in records:
            lines.append(",".join([
                str(rec.seed), str(rec.m), str(rec.n),
                repr(rec.oracle_optimum), repr(rec.final_objective),
                repr(rec.final_residual_norm), repr(rec.objective_gap),
                repr(rec.worst_bound_violation)]))
        max_res = max(rec.final_residual_norm for rec in records)
        max_gap = max(rec.objective_gap for rec in records)
        print(f"instances: {len(records)}")
        print(f"max_residual_norm: {repr(max_res)}")
        print(f"max_objective_gap: {repr(max_gap)}")
        if args.out:
            Path(args.out).write_text("\n".join(lines) + "\n",
                                      encoding="ascii")
        if args.figure:
            figures.save_gap_scatter(records, args.figure,
                                     title="residual vs objective gap")
        return EXIT_OK

    if args.suite == "modes":
        trajectories = studies.modes_study()
        for mode, traj in trajectories.items():
            last = traj.rows[-1]
            print(f"{mode}: iterations {last.iter}, residual "
                  f"{repr(last.residual_norm)}, objective "
                  f"{repr(last.objective)}, final |lambda| "
                  f"{repr(last.lambda_norm)}")
        if args.out:
            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            for mode, traj in trajectories.items():
                write_trace_file(traj.trace_rows(),
                                 outdir / f"mode_{mode}.csv", mode=mode)
        if args.figure:
            figures.save_modes_figure(trajectories, args.figure,
                                      title="reference modes")
        return EXIT_OK

    # qap-dims
    rows = studies.qap_dims_rows()
    lines = ["n,rows,cols,rows_formula,cols_formula,match"]
    print("n rows cols rows_formula cols_formula match")
    for row in rows:
        print(f"{row['n']} {row['rows']} {row['cols']} "
              f"{row['rows_formula']} {row['cols_formula']} {row['match']}")
        lines.append(",".join(str(row[k]) for k in
                              ("n", "rows", "cols", "rows_formula",
                               "cols_formula", "match")))
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="ascii")
    return EXIT_OK


def cmd_oracle(args):
    try:
        g = _read_general_lp(args.path)
        lp, _ = to_standard_form(g)
    except (MpsParseError, ModelError, OSError) as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        res = solve_by_enumeration(lp)
    except OracleSizeError as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_ORACLE_GUARD
    print(f"status: {res.status}")
    if res.optimum is not None:
        print(f"optimum: {repr(res.optimum)}")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "solve":
            return cmd_solve(args)
        if args.command == "qapgen":
            return cmd_qapgen(args)
        if args.command == "dualize":
            return cmd_dualize(args)
        if args.command == "study":
            return cmd_study(args)
        if args.command == "oracle":
            return cmd_oracle(args)
    except UnboundedRayError as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except ParameterError as exc:
        print(f"penaltycrash: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
