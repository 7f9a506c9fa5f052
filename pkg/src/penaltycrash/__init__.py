"""penaltycrash: a quadratic-penalty crash solver for linear programs.

The crash approximately minimizes  c'x + lambda'r(x) + r(x)'r(x)/(2 mu)
over x >= 0 (r = Ax - b) by exact single-coordinate steps, shrinking mu
toward zero and replacing lambda by mu*r between iterations.  Reference
modes with exact subproblem minimization (plain penalty and augmented
Lagrangian) and a QAP linearization pipeline round out the package.
"""

from .crash import (IdiotConfig, IdiotOutcome, IdiotState, STATUS_ABANDONED,
                    STATUS_CONVERGED, STATUS_ITERATION_LIMIT,
                    STATUS_UNBOUNDED, coordinate_step, run_idiot, sweep)
from .errors import (DimensionError, ModelError, MpsParseError,
                     OracleSizeError, ParameterError, PenaltyCrashError,
                     QapParseError, SubproblemToleranceError,
                     UnboundedRayError)
from .lab import (LabConfig, LabTrajectory, MODE_AUGMENTED_LAGRANGIAN,
                  MODE_EXACT_IDIOT, MODE_QUADRATIC_PENALTY,
                  minimize_subproblem, run_augmented_lagrangian,
                  run_exact_idiot, run_quadratic_penalty)
from .model import (ERROR_GUARDED_GAP, ERROR_REVERSE_RELATIVE,
                    SolutionReport, SparseColMatrix, StandardFormLP, TraceRow,
                    compute_residual, idiot_objective,
                    idiot_objective_expanded, objective_error, write_trace)
from .mps import (GeneralLP, VariableMap, parse_mps, parse_mps_file,
                  to_standard_form, write_mps, write_mps_file)
from .oracle import OracleResult, solve_by_enumeration
from .qap import (DualMap, QapInstance, aj_dimensions, aj_linearize,
                  assignment_vector, brute_force_qap_optimum, dualize,
                  parse_qaplib, parse_qaplib_file, permutation_cost)

__version__ = "0.1.0"
