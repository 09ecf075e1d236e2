import sys
from datetime import datetime, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from inspectlens import (
    CoefficientSet,
    DefectCounts,
    FitDiagnostics,
    InspectionSession,
    ModelKind,
    Phase,
    PhaseObservation,
    ProjectRecord,
)

FIXED_TIME = datetime(2024, 3, 1, 12, 0, 0, tzinfo=timezone.utc)


def make_coeffs(model: ModelKind, betas, residuals=(0.0,) * 6) -> CoefficientSet:
    """Hand-built coefficient set for planner/predict tests (not fitted)."""
    return CoefficientSet(
        model=model,
        betas=tuple(float(b) for b in betas),
        fitted_from=tuple(f"P{i}" for i in range(1, len(residuals) + 1)),
        fitted_at=FIXED_TIME,
        diagnostics=FitDiagnostics(
            residuals=tuple(residuals),
            sse=sum(r * r for r in residuals),
            r_squared=1.0,
            condition_estimate=1.0,
            degrees_of_freedom=len(residuals) - len(betas),
        ),
    )


def make_session(**overrides) -> InspectionSession:
    params = dict(
        num_inspectors=3,
        inspection_time=2.0,
        prep_time=1.0,
        experience_level=4.0,
        function_points=120.0,
    )
    params.update(overrides)
    return InspectionSession(**params)


def make_record(
    pid="P1",
    phase_counts=((10, 20), (8, 16), (9, 18)),
    total_person_hours=None,
    total_captured_pct=None,
    **session_overrides,
):
    phases = []
    for phase, (found, total) in zip(Phase, phase_counts):
        phases.append(
            PhaseObservation(
                phase=phase,
                counts=DefectCounts(inspection_found=found, total_found=total),
                session=make_session(**session_overrides),
            )
        )
    return ProjectRecord(
        id=pid,
        phases=tuple(phases),
        total_person_hours=total_person_hours,
        total_captured_pct=total_captured_pct,
    )


@pytest.fixture
def process_identity_x1():
    """Process model whose output is exactly x1."""
    return make_coeffs(ModelKind.PROCESS, (0.0, 1.0, 0.0, 0.0, 0.0))
