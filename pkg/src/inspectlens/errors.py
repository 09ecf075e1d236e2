"""Exception hierarchy shared across the toolkit.

Every error raised by inspectlens is a subclass of :class:`InspectLensError`,
so callers can catch the whole family with one clause. The CLI maps these
classes onto exit codes; the HTTP service maps them onto response bodies.
"""

from __future__ import annotations


class InspectLensError(Exception):
    """Base class for all inspectlens errors."""


# --- metric computation ---------------------------------------------------

class UndefinedMetric(InspectLensError):
    """A metric has no value for the given input (e.g. DI with zero defects)."""


class EmptyInput(InspectLensError):
    """An aggregate was requested over an empty collection."""


class MissingCounts(InspectLensError):
    """Pooled aggregation needs defect counts that were not supplied."""


class OutOfDomain(InspectLensError):
    """A value lies outside the domain an operation is defined on."""


# --- regression -----------------------------------------------------------

class InsufficientRows(InspectLensError):
    """Fewer observations than the model minimum.

    Carries ``required`` and ``provided`` so callers can report both.
    """

    def __init__(self, required: int, provided: int, model: str):
        self.required = required
        self.provided = provided
        self.model = model
        super().__init__(
            f"{model} model requires at least {required} rows, got {provided}"
        )


class ArityMismatch(InspectLensError):
    """A regressor vector does not match the model's coefficient layout."""


class RankDeficient(InspectLensError):
    """The design matrix has linearly dependent columns.

    ``rank`` is the detected numerical rank; ``column`` is the original
    design-matrix column index (0 = intercept) first found redundant.
    """

    def __init__(self, rank: int, column: int, message: str | None = None):
        self.rank = rank
        self.column = column
        name = "intercept" if column == 0 else f"x{column}"
        super().__init__(
            message
            or f"design matrix is rank deficient (rank {rank}); "
               f"column {column} ({name}) is linearly dependent on earlier columns"
        )


class ShapeMismatch(InspectLensError):
    """Design matrix and coefficient set have incompatible shapes."""


# --- planner ----------------------------------------------------------------

class UnsolvableParameter(InspectLensError):
    """The requested regressor has a zero coefficient and cannot move the target."""


class EmptyGrid(InspectLensError):
    """A scan request produces no grid points."""


# --- datastore --------------------------------------------------------------

class ParseError(InspectLensError):
    """A file could not be parsed as the documented format."""


class ValidationError(InspectLensError):
    """Loaded data violates an invariant.

    ``violations`` collects every breach found, each as a
    ``(location, field, message)`` triple, so one load reports all problems
    rather than just the first.
    """

    def __init__(self, violations: list[tuple[str, str, str]]):
        self.violations = list(violations)
        lines = [f"{loc} [{field}]: {msg}" for loc, field, msg in self.violations]
        super().__init__(
            f"{len(self.violations)} validation error(s):\n  " + "\n  ".join(lines)
        )


class FixtureCorrupt(InspectLensError):
    """The bundled dataset fails its pinned checksum."""


class IoError(InspectLensError):
    """Reading or writing a datastore file failed."""


class SchemaVersionMismatch(InspectLensError):
    """A serialized file declares an unsupported or inconsistent schema."""


# --- non-fatal fit warnings -------------------------------------------------

class IllConditionedWarning(UserWarning):
    """Condition estimate exceeds the safe threshold; coefficients may be noisy."""


class ZeroDegreesOfFreedomWarning(UserWarning):
    """Exactly-determined fit: as many rows as coefficients, residuals ~ 0."""
