"""Exception types shared across the package."""


class LoewnerLabError(Exception):
    """Base class for every error raised by loewnerlab."""


class NonConvergence(LoewnerLabError):
    """Jacobi sweeps exhausted before reaching the off-diagonal norm target."""


class NotPositiveDefinite(LoewnerLabError):
    """An operation needed a positive definite matrix and did not get one."""


class DimensionMismatch(LoewnerLabError):
    """Two matrices that must share a dimension do not."""


class BadExponent(LoewnerLabError):
    """Exponent outside the valid range of the inequality being checked."""


class BadParameters(LoewnerLabError):
    """Parameter tuple violates the constraints of the requested operation."""


class PreconditionViolated(LoewnerLabError):
    """Operation called outside the hypothesis/region it is defined for."""


class BudgetExhausted(LoewnerLabError):
    """A sampler ran out of attempts before producing an accepted draw."""


class NumericalFailure(LoewnerLabError):
    """Numerics broke an invariant that holds in exact arithmetic."""


class InvalidTarget(LoewnerLabError):
    """Hunt requested for a conclusion that is proven under the given params."""


class MatrixFileError(LoewnerLabError):
    """Matrix file does not conform to the documented format."""
