"""Regression models for predicting DI and IPM from inspection parameters.

Two model layouts exist. The process model explains DI with four regressors
(inspection time, preparation time, inspector count, experience); the team
model explains IPM with those four plus log-scale project complexity. Both
are plain multiple linear regressions fitted by least squares.

The solver is Householder QR with column pivoting, which detects rank
deficiency reliably on near-collinear shop-floor data. Normal equations are
deliberately not used here; they exist only as an independent oracle in the
test suite.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    IllConditionedWarning,
    InsufficientRows,
    RankDeficient,
    ShapeMismatch,
    UndefinedMetric,
    ValidationError,
    ZeroDegreesOfFreedomWarning,
)
from .metrics import (
    Aggregation,
    Band,
    InspectionSession,
    ProjectRecord,
    aggregate_metric,
    classify_band,
    compute_di,
    compute_ipm,
)

# x5 is project complexity on a log scale; base 10 here, change in one place
# if a natural-log convention is ever preferred.
FP_LOG_BASE = 10.0

# A pivot below this fraction of the largest pivot counts as zero.
RANK_TOLERANCE = 1e-10

# Condition estimates above this trigger a non-fatal IllConditionedWarning.
ILL_CONDITIONED_THRESHOLD = 1e8


class ModelKind(enum.Enum):
    """Which regression layout a coefficient set belongs to."""

    PROCESS = "process"  # DI model: intercept + x1..x4
    TEAM = "team"        # IPM model: intercept + x1..x5

    @property
    def n_regressors(self) -> int:
        return 4 if self is ModelKind.PROCESS else 5

    @property
    def n_coefficients(self) -> int:
        return self.n_regressors + 1

    @property
    def min_rows(self) -> int:
        # one historical project per coefficient: 5 for process, 6 for team
        return self.n_coefficients


def log_complexity(function_points: float) -> float:
    """Convert raw function points into the x5 regressor (log base 10)."""
    if not function_points > 0:
        raise ValueError(f"function_points must be > 0, got {function_points}")
    return math.log(function_points, FP_LOG_BASE)


@dataclass(frozen=True)
class RegressorVector:
    """One point in model space.

    x1 inspection time (person-hours), x2 preparation time, x3 inspector
    count, x4 experience years, x5 log-scale complexity (team model only).
    Construction is deliberately lax about numeric domains so what-if tools
    can evaluate infeasible points; ``domain_violations`` reports breaches
    and the design-matrix builder rejects them for observed training data.
    """

    x1: float
    x2: float
    x3: float
    x4: float
    x5: float | None = None

    def arity_check(self, model: ModelKind) -> None:
        if model is ModelKind.TEAM and self.x5 is None:
            raise ArityMismatch("team model requires x5 (log complexity); it is missing")
        if model is ModelKind.PROCESS and self.x5 is not None:
            raise ArityMismatch("process model takes x1..x4 only; x5 was supplied")

    def values(self, model: ModelKind) -> tuple[float, ...]:
        """Regressor values in model order, after an arity check."""
        self.arity_check(model)
        base = (self.x1, self.x2, self.x3, self.x4)
        return base + (self.x5,) if model is ModelKind.TEAM else base

    def domain_violations(self) -> list[str]:
        """Human-readable domain breaches; empty when the point is feasible."""
        out = []
        if not self.x1 > 0:
            out.append(f"x1 (inspection time) must be > 0, got {self.x1}")
        if self.x2 < 0:
            out.append(f"x2 (preparation time) must be >= 0, got {self.x2}")
        if self.x3 < 1:
            out.append(f"x3 (number of inspectors) must be >= 1, got {self.x3}")
        if self.x4 < 0:
            out.append(f"x4 (experience level) must be >= 0, got {self.x4}")
        for name, v in (("x1", self.x1), ("x2", self.x2), ("x3", self.x3),
                        ("x4", self.x4), ("x5", self.x5)):
            if v is not None and not math.isfinite(v):
                out.append(f"{name} must be finite, got {v}")
        return out


REGRESSOR_NAMES = {
    1: "inspection time",
    2: "preparation time",
    3: "number of inspectors",
    4: "experience level",
    5: "log complexity",
}


def regressors_from_session(session: InspectionSession, model: ModelKind) -> RegressorVector:
    """Map an observed inspection session into model space."""
    x5 = log_complexity(session.function_points) if model is ModelKind.TEAM else None
    return RegressorVector(
        x1=session.inspection_time,
        x2=session.prep_time,
        x3=float(session.num_inspectors),
        x4=session.experience_level,
        x5=x5,
    )


@dataclass(frozen=True)
class DesignMatrix:
    """Observed (regressors, y) rows plus the model they belong to.

    ``labels`` records where each row came from (project ids) and feeds the
    provenance field of fitted coefficient sets.
    """

    rows: tuple[tuple[RegressorVector, float], ...]
    model: ModelKind
    labels: tuple[str, ...]

    def matrix(self) -> np.ndarray:
        """n x p design matrix with the leading column of ones."""
        data = [(1.0,) + x.values(self.model) for x, _ in self.rows]
        return np.array(data, dtype=float)

    def y_vector(self) -> np.ndarray:
        return np.array([y for _, y in self.rows], dtype=float)


def build_design_matrix(
    observations: Sequence[tuple[RegressorVector, float]],
    model: ModelKind,
    labels: Sequence[str] | None = None,
) -> DesignMatrix:
    """Assemble and validate a design matrix.

    Checks the model row minimum, per-row arity, and numeric domains for the
    observed regressors (training data must be real observations, unlike
    what-if inputs). Row order is preserved.
    """
    n = len(observations)
    if n < model.min_rows:
        raise InsufficientRows(required=model.min_rows, provided=n, model=model.value)
    if labels is None:
        labels = [f"row{i + 1}" for i in range(n)]
    elif len(labels) != n:
        raise ShapeMismatch(f"{len(labels)} labels for {n} observations")

    violations = []
    for i, (x, y) in enumerate(observations):
        x.arity_check(model)
        for msg in x.domain_violations():
            violations.append((labels[i], "regressors", msg))
        if not math.isfinite(y):
            violations.append((labels[i], "y", f"observed value must be finite, got {y}"))
    if violations:
        raise ValidationError(violations)

    return DesignMatrix(rows=tuple(observations), model=model, labels=tuple(labels))


@dataclass(frozen=True)
class FitDiagnostics:
    """Residual-based quality measures for a fitted coefficient set."""

    residuals: tuple[float, ...]
    sse: float
    r_squared: float
    condition_estimate: float
    degrees_of_freedom: int

    @property
    def zero_dof(self) -> bool:
        """True for exactly-determined fits (n equals coefficient count)."""
        return self.degrees_of_freedom == 0


@dataclass(frozen=True)
class CoefficientSet:
    """A fitted beta vector (intercept first) with provenance."""

    model: ModelKind
    betas: tuple[float, ...]
    fitted_from: tuple[str, ...]
    fitted_at: datetime
    diagnostics: FitDiagnostics

    def __post_init__(self):
        if len(self.betas) != self.model.n_coefficients:
            raise ArityMismatch(
                f"{self.model.value} model needs {self.model.n_coefficients} "
                f"coefficients, got {len(self.betas)}"
            )


def _qr_solve(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Least squares via Householder QR with column pivoting.

    Returns (beta, condition_estimate). Raises RankDeficient when a pivot
    falls below RANK_TOLERANCE times the largest pivot; the offending column
    is reported in original (unpermuted) indexing.
    """
    A = np.array(X, dtype=float)
    b = np.array(y, dtype=float)
    n, p = A.shape
    perm = np.arange(p)

    for k in range(p):
        # pivot: move the column with the largest remaining norm to position k
        norms = np.sqrt((A[k:, k:] ** 2).sum(axis=0))
        j = k + int(np.argmax(norms))
        if j != k:
            A[:, [k, j]] = A[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]

        x = A[k:, k]
        norm_x = float(np.sqrt((x ** 2).sum()))
        if norm_x == 0.0:
            continue  # dead column; caught by the rank check below
        v = x.copy()
        # sign choice avoids cancellation in v[0]
        v[0] += math.copysign(norm_x, x[0]) if x[0] != 0.0 else norm_x
        vtv = float(v @ v)
        if vtv == 0.0:
            continue
        scale = 2.0 / vtv
        A[k:, k:] -= np.outer(v, scale * (v @ A[k:, k:]))
        b[k:] -= (scale * float(v @ b[k:])) * v

    pivots = np.abs(np.diag(A[:p, :p]))
    largest = float(pivots.max(initial=0.0))
    if largest == 0.0:
        raise RankDeficient(rank=0, column=int(perm[0]))
    dead = pivots <= RANK_TOLERANCE * largest
    if dead.any():
        rank = int(np.argmax(dead))  # pivoting orders pivot magnitudes descending
        raise RankDeficient(rank=rank, column=int(perm[rank]))

    # back substitution on the p x p upper triangle
    z = np.zeros(p)
    for i in range(p - 1, -1, -1):
        z[i] = (b[i] - A[i, i + 1 : p] @ z[i + 1 : p]) / A[i, i]
    beta = np.empty(p)
    beta[perm] = z

    condition_estimate = largest / float(pivots.min())
    return beta, condition_estimate


def fit_least_squares(
    dm: DesignMatrix,
    *,
    fitted_at: datetime | None = None,
) -> CoefficientSet:
    """Fit betas minimizing the squared residual norm.

    Emits ZeroDegreesOfFreedomWarning for exactly-determined fits and
    IllConditionedWarning (non-fatal) when the condition estimate exceeds
    ILL_CONDITIONED_THRESHOLD. ``fitted_at`` is injectable so callers can pin
    timestamps; it defaults to the current UTC time.
    """
    X = dm.matrix()
    y = dm.y_vector()
    n, p = X.shape

    beta, condition_estimate = _qr_solve(X, y)
    if condition_estimate > ILL_CONDITIONED_THRESHOLD:
        warnings.warn(
            f"design matrix condition estimate {condition_estimate:.3g} exceeds "
            f"{ILL_CONDITIONED_THRESHOLD:.0e}; coefficients may be unstable",
            IllConditionedWarning,
            stacklevel=2,
        )

    residuals = y - X @ beta
    diagnostics = _diagnostics(residuals, y, condition_estimate, n, p)
    if diagnostics.zero_dof:
        warnings.warn(
            f"exactly-determined fit: {n} rows for {p} coefficients leaves zero "
            "degrees of freedom; residuals are not informative",
            ZeroDegreesOfFreedomWarning,
            stacklevel=2,
        )

    if fitted_at is None:
        fitted_at = datetime.now(timezone.utc)
    return CoefficientSet(
        model=dm.model,
        betas=tuple(float(v) for v in beta),
        fitted_from=dm.labels,
        fitted_at=fitted_at,
        diagnostics=diagnostics,
    )


def _diagnostics(
    residuals: np.ndarray,
    y: np.ndarray,
    condition_estimate: float,
    n: int,
    p: int,
) -> FitDiagnostics:
    sse = float(residuals @ residuals)
    sst = float(((y - y.mean()) ** 2).sum())
    # constant y fits exactly through the intercept; define R^2 = 1 there
    r_squared = 1.0 if sst == 0.0 else 1.0 - sse / sst
    return FitDiagnostics(
        residuals=tuple(float(r) for r in residuals),
        sse=sse,
        r_squared=r_squared,
        condition_estimate=condition_estimate,
        degrees_of_freedom=n - p,
    )


@dataclass(frozen=True)
class PredictionResult:
    """Model output for one regressor vector.

    ``y_raw`` is the unconstrained linear prediction. For the process model,
    ``y_clamped`` pins it to [0, 1] (DI's domain) and ``band`` classifies the
    clamped value; ``out_of_range`` flags predictions the clamp altered. The
    team model has no published range, so those fields stay empty.
    """

    y_raw: float
    y_clamped: float | None
    band: Band | None
    out_of_range: bool


def predict(coeffs: CoefficientSet, x: RegressorVector) -> PredictionResult:
    """Evaluate the fitted linear form at ``x`` (error term taken as zero)."""
    xs = x.values(coeffs.model)
    y_raw = coeffs.betas[0]
    for b, v in zip(coeffs.betas[1:], xs):
        y_raw += b * v

    if coeffs.model is ModelKind.PROCESS:
        y_clamped = min(max(y_raw, 0.0), 1.0)
        return PredictionResult(
            y_raw=y_raw,
            y_clamped=y_clamped,
            band=classify_band(y_clamped),
            out_of_range=not 0.0 <= y_raw <= 1.0,
        )
    return PredictionResult(y_raw=y_raw, y_clamped=None, band=None, out_of_range=False)


def validate_fit(dm: DesignMatrix, coeffs: CoefficientSet) -> FitDiagnostics:
    """Recompute diagnostics for ``coeffs`` against ``dm`` from scratch.

    Useful as an integrity check on stored coefficient files: the recomputed
    values must agree with the stored diagnostics within float round-off.
    """
    if coeffs.model is not dm.model:
        raise ShapeMismatch(
            f"coefficients are for the {coeffs.model.value} model, "
            f"design matrix for the {dm.model.value} model"
        )
    X = dm.matrix()
    y = dm.y_vector()
    n, p = X.shape
    if len(coeffs.betas) != p:
        raise ShapeMismatch(f"{len(coeffs.betas)} betas for {p} design columns")

    _, condition_estimate = _qr_solve(X, y)
    residuals = y - X @ np.array(coeffs.betas)
    return _diagnostics(residuals, y, condition_estimate, n, p)


# --- building training rows from shop-floor records ----------------------------


class FitGranularity(enum.Enum):
    """Whether each historical project contributes one row or one per phase."""

    PROJECT = "project"
    PHASE = "phase"


def training_rows_from_records(
    records: Sequence[ProjectRecord],
    model: ModelKind,
    granularity: FitGranularity = FitGranularity.PROJECT,
) -> tuple[list[tuple[RegressorVector, float]], list[str]]:
    """Turn project records into (regressors, y) rows plus provenance labels.

    The process model regresses DI, the team model IPM. At PROJECT
    granularity each project contributes the phase-averaged parameters and
    metric; at PHASE granularity every phase is its own row. Phases whose DI
    is undefined (zero observed defects) cannot contribute a process-model y
    and are skipped; a project with no usable phase raises UndefinedMetric.
    """
    observations: list[tuple[RegressorVector, float]] = []
    labels: list[str] = []
    for record in records:
        usable = []
        for obs in record.phases:
            if model is ModelKind.PROCESS and obs.counts.total_found == 0:
                continue
            usable.append(obs)
        if not usable:
            raise UndefinedMetric(
                f"project {record.id}: no phase has a defined "
                f"{'DI' if model is ModelKind.PROCESS else 'IPM'} value"
            )

        if granularity is FitGranularity.PHASE:
            for obs in usable:
                y = (
                    compute_di(obs.counts)
                    if model is ModelKind.PROCESS
                    else compute_ipm(obs.counts.inspection_found, obs.session)
                )
                observations.append((regressors_from_session(obs.session, model), y))
                labels.append(f"{record.id}/{obs.phase.value}")
            continue

        sessions = [obs.session for obs in usable]
        k = len(sessions)
        mean_fp = sum(s.function_points for s in sessions) / k
        x = RegressorVector(
            x1=sum(s.inspection_time for s in sessions) / k,
            x2=sum(s.prep_time for s in sessions) / k,
            x3=sum(s.num_inspectors for s in sessions) / k,
            x4=sum(s.experience_level for s in sessions) / k,
            x5=log_complexity(mean_fp) if model is ModelKind.TEAM else None,
        )
        if model is ModelKind.PROCESS:
            y = aggregate_metric([compute_di(obs.counts) for obs in usable],
                                 Aggregation.MEAN_OF_PHASES)
        else:
            y = aggregate_metric(
                [compute_ipm(obs.counts.inspection_found, obs.session) for obs in usable],
                Aggregation.MEAN_OF_PHASES,
            )
        observations.append((x, y))
        labels.append(record.id)
    return observations, labels
