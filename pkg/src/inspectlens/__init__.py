"""Inspection quality analytics: metrics, banding, regression, what-if tools."""

from .errors import (
    ArityMismatch,
    EmptyGrid,
    EmptyInput,
    FixtureCorrupt,
    IllConditionedWarning,
    InspectLensError,
    InsufficientRows,
    IoError,
    MissingCounts,
    OutOfDomain,
    ParseError,
    RankDeficient,
    SchemaVersionMismatch,
    ShapeMismatch,
    UndefinedMetric,
    UnsolvableParameter,
    ValidationError,
    ZeroDegreesOfFreedomWarning,
)
from .metrics import (
    BAND_TABLE,
    Aggregation,
    Band,
    BandLabel,
    DefectCounts,
    InspectionSession,
    Phase,
    PhaseObservation,
    PhaseReport,
    ProjectRecord,
    ProjectReport,
    aggregate_metric,
    classify_band,
    compute_di,
    compute_ipm,
    project_report,
)
from .planner import (
    IntegerCandidate,
    ScanPoint,
    ScanRequest,
    TuneRequest,
    TuneResult,
    band_threshold,
    prediction_for,
    scan,
    solve_parameter,
)
from .regression import (
    CoefficientSet,
    DesignMatrix,
    FitDiagnostics,
    FitGranularity,
    ModelKind,
    PredictionResult,
    RegressorVector,
    build_design_matrix,
    fit_least_squares,
    log_complexity,
    predict,
    regressors_from_session,
    training_rows_from_records,
    validate_fit,
)
from .datastore import (
    FixtureRow,
    RecordFormat,
    coefficients_from_dict,
    coefficients_to_dict,
    current_timestamp,
    fixture_path,
    infer_format,
    load_coefficients,
    load_fixture,
    load_records,
    save_coefficients,
    save_records,
)

__version__ = "0.1.0"

__all__ = [
    "Aggregation",
    "ArityMismatch",
    "BAND_TABLE",
    "Band",
    "BandLabel",
    "CoefficientSet",
    "DefectCounts",
    "DesignMatrix",
    "EmptyGrid",
    "EmptyInput",
    "FitDiagnostics",
    "FitGranularity",
    "FixtureCorrupt",
    "FixtureRow",
    "IllConditionedWarning",
    "InspectLensError",
    "InspectionSession",
    "InsufficientRows",
    "IntegerCandidate",
    "IoError",
    "MissingCounts",
    "ModelKind",
    "OutOfDomain",
    "ParseError",
    "Phase",
    "PhaseObservation",
    "PhaseReport",
    "PredictionResult",
    "ProjectRecord",
    "ProjectReport",
    "RankDeficient",
    "RecordFormat",
    "RegressorVector",
    "ScanPoint",
    "ScanRequest",
    "SchemaVersionMismatch",
    "ShapeMismatch",
    "TuneRequest",
    "TuneResult",
    "UndefinedMetric",
    "UnsolvableParameter",
    "ValidationError",
    "ZeroDegreesOfFreedomWarning",
    "aggregate_metric",
    "band_threshold",
    "build_design_matrix",
    "classify_band",
    "coefficients_from_dict",
    "coefficients_to_dict",
    "compute_di",
    "compute_ipm",
    "current_timestamp",
    "fit_least_squares",
    "fixture_path",
    "infer_format",
    "load_coefficients",
    "load_fixture",
    "load_records",
    "log_complexity",
    "predict",
    "prediction_for",
    "project_report",
    "regressors_from_session",
    "save_coefficients",
    "save_records",
    "scan",
    "solve_parameter",
    "training_rows_from_records",
    "validate_fit",
]
