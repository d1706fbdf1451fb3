"""Exception hierarchy shared by every module in the package."""


class WeakDiscordError(Exception):
    """Base class; ``code`` is the short machine-readable name used by the CLI."""

    code = "error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class DimensionMismatch(WeakDiscordError, ValueError):
    code = "dimension_mismatch"


class DimensionOverflow(WeakDiscordError, ValueError):
    code = "dimension_overflow"


class NonHermitianInput(WeakDiscordError, ValueError):
    code = "non_hermitian_input"


class ConvergenceFailure(WeakDiscordError, RuntimeError):
    code = "convergence_failure"


class InvalidDensityMatrix(WeakDiscordError, ValueError):
    code = "invalid_density_matrix"


class NotHermitian(InvalidDensityMatrix):
    code = "not_hermitian"


class NotUnitTrace(InvalidDensityMatrix):
    code = "not_unit_trace"


class NotPositive(InvalidDensityMatrix):
    code = "not_positive"


class InvalidRank(WeakDiscordError, ValueError):
    code = "invalid_rank"


class NotUnitary(WeakDiscordError, ValueError):
    code = "not_unitary"


class InvalidCoefficients(WeakDiscordError, ValueError):
    code = "invalid_coefficients"


class ZeroProbabilityBranch(WeakDiscordError, ValueError):
    code = "zero_probability_branch"
