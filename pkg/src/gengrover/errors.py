"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` which the CLI prints on
stderr next to the message.
"""


class GroverError(Exception):
    code = "GROVER_ERROR"


class NonHermitian(GroverError, ValueError):
    code = "NON_HERMITIAN"


class NonSquare(GroverError, ValueError):
    code = "NON_SQUARE"


class RankDeficient(GroverError, ValueError):
    code = "RANK_DEFICIENT"


class IndexOutOfRange(GroverError, IndexError):
    code = "INDEX_OUT_OF_RANGE"


class DimensionMismatch(GroverError, ValueError):
    code = "DIMENSION_MISMATCH"


class DuplicateTarget(GroverError, ValueError):
    code = "DUPLICATE_TARGET"


class OrthogonalToTargets(GroverError, ValueError):
    code = "ORTHOGONAL_TO_TARGETS"


class RankViolation(GroverError, ValueError):
    code = "RANK_VIOLATION"


class DegenerateMode(GroverError, ArithmeticError):
    code = "DEGENERATE_MODE"


class NonPositiveC(GroverError, ValueError):
    code = "NON_POSITIVE_C"


class OutOfRange(GroverError, ValueError):
    code = "OUT_OF_RANGE"


class ImprobableOutcome(GroverError, ValueError):
    code = "IMPROBABLE_OUTCOME"


class InfeasibleSize(GroverError, ValueError):
    code = "INFEASIBLE_SIZE"


class DegenerateFit(GroverError, ValueError):
    code = "DEGENERATE_FIT"


class ParseError(GroverError, ValueError):
    code = "PARSE_ERROR"


class ValidationError(GroverError, ValueError):
    code = "VALIDATION_ERROR"


class SourceSpansWarning(UserWarning):
    """Raised as a warning when N > M: unpaired source directions lower the success rate."""
