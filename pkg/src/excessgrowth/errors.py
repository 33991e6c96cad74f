"""Exception types shared across the package.

Every error carries a stable machine-readable ``code`` (the class name) so the
CLI can emit structured error envelopes.
"""


class ExcessGrowthError(Exception):
    """Base class for all library errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class ZeroOnSupport(ExcessGrowthError):
    """A vector is zero somewhere the reference support requires positivity."""


class BoundaryPoint(ExcessGrowthError):
    """An open-simplex (strictly positive) argument has a zero entry."""


class DimensionMismatch(ExcessGrowthError):
    """Vector/block lengths are inconsistent."""


class DomainViolation(ExcessGrowthError):
    """Arguments fall outside the domain of the requested quantity."""


class GeneratorViolation(ExcessGrowthError):
    """A generator failed an exponential-concavity requirement."""


class TangencyViolation(ExcessGrowthError):
    """A direction vector is not tangent to the simplex (entries do not sum to 0)."""


class QuadratureFailure(ExcessGrowthError):
    """Adaptive quadrature exhausted its budget before reaching tolerance."""


class NoConvergence(ExcessGrowthError):
    """An iterative solver exhausted its budget.

    Solvers attach their best iterate to ``result`` so callers can inspect how
    close the run got.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class ParseError(ExcessGrowthError):
    """A data file is structurally unreadable."""


class RaggedRows(ExcessGrowthError):
    """A data file has rows of inconsistent width."""


class NonPositiveReturn(ExcessGrowthError):
    """A gross-return entry is zero or negative.

    ``row`` and ``col`` are 1-based coordinates over the data rows and asset
    columns of the offending file.
    """

    def __init__(self, row: int, col: int, value: float):
        super().__init__(
            f"gross return must be positive; got {value!r} at data row {row}, asset column {col}"
        )
        self.row = row
        self.col = col
        self.value = value
