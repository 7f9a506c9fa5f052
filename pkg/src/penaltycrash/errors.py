"""Exception types shared across the package."""


class PenaltyCrashError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(PenaltyCrashError):
    """Vector/matrix dimensions do not agree."""


class ParameterError(PenaltyCrashError):
    """A numeric parameter is outside its admissible range."""


class ModelError(PenaltyCrashError):
    """The optimization model itself is malformed (e.g. crossed bounds)."""


class MpsParseError(PenaltyCrashError):
    """MPS input could not be parsed.  Carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class QapParseError(PenaltyCrashError):
    """QAPLIB input could not be parsed.  Carries the token position."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"token {position}: {message}"
        super().__init__(message)


class OracleSizeError(PenaltyCrashError):
    """Instance is too large for exhaustive enumeration."""


class UnboundedRayError(PenaltyCrashError):
    """A structurally unbounded direction was detected (empty column with
    negative cost: the objective decreases without limit along that axis)."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"objective unbounded along coordinate {column} "
                         f"(empty column with negative cost)")


class SubproblemToleranceError(PenaltyCrashError):
    """Inner minimization hit its pass limit before reaching the requested
    projected-gradient tolerance.  Carries the best point found."""

    def __init__(self, best_point, violation, tol, passes):
        self.best_point = best_point
        self.violation = violation
        super().__init__(
            f"subproblem stopped after {passes} passes with projected-gradient "
            f"violation {violation:.3e} > tolerance {tol:.3e}")


class MpsWarning(UserWarning):
    """Non-fatal irregularity in MPS input (ignored content)."""
