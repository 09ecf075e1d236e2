"""Shared JSON wire shapes for the CLI and the HTTP service.

Both front ends must emit identical structures for identical inputs (scripts
diff them), so every response dict is built here and imported by both sides
rather than assembled twice.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Iterable

from .datastore import _format_rfc3339
from .metrics import BAND_TABLE, Band, ProjectReport
from .planner import ScanPoint, TuneResult
from .regression import CoefficientSet, FitDiagnostics, PredictionResult


def coefficient_id(coeffs: CoefficientSet) -> str:
    """Content-hash id: the same model and betas always map to the same id."""
    canonical = json.dumps(
        {"model": coeffs.model.value, "betas": list(coeffs.betas)},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def band_label(band: Band | None) -> str | None:
    return None if band is None else band.label.text


def bands_payload() -> list[dict[str, Any]]:
    return [
        {"label": b.label.text, "lower": b.lower, "upper": b.upper}
        for b in BAND_TABLE
    ]


def prediction_payload(p: PredictionResult) -> dict[str, Any]:
    return {
        "y_raw": p.y_raw,
        "y_clamped": p.y_clamped,
        "band": band_label(p.band),
        "out_of_range": p.out_of_range,
    }


def tune_payload(t: TuneResult) -> dict[str, Any]:
    candidates = None
    if t.integer_candidates is not None:
        candidates = [
            {
                "value": c.value,
                "y_raw": c.y_raw,
                "band": band_label(c.band),
                "feasible": c.feasible,
            }
            for c in t.integer_candidates
        ]
    return {
        "value": t.value,
        "feasible": t.feasible,
        "band": band_label(t.band),
        "integer_candidates": candidates,
    }


def scan_payload(points: Iterable[ScanPoint]) -> dict[str, Any]:
    return {
        "points": [
            {"value": p.value, "y_raw": p.y_raw, "band": band_label(p.band)}
            for p in points
        ]
    }


def diagnostics_payload(d: FitDiagnostics) -> dict[str, Any]:
    return {
        "residuals": list(d.residuals),
        "sse": d.sse,
        "r_squared": d.r_squared,
        "condition_estimate": d.condition_estimate,
        "degrees_of_freedom": d.degrees_of_freedom,
    }


def fit_payload(coeffs: CoefficientSet) -> dict[str, Any]:
    return {
        "coeff_id": coefficient_id(coeffs),
        "model": coeffs.model.value,
        "betas": list(coeffs.betas),
        "fitted_from": list(coeffs.fitted_from),
        "fitted_at": _format_rfc3339(coeffs.fitted_at),
        "diagnostics": diagnostics_payload(coeffs.diagnostics),
    }


def coefficient_summary(coeffs: CoefficientSet) -> dict[str, Any]:
    """Listing entry: metadata only, no betas (clients must predict via the API)."""
    return {
        "coeff_id": coefficient_id(coeffs),
        "model": coeffs.model.value,
        "fitted_at": _format_rfc3339(coeffs.fitted_at),
        "fitted_from": list(coeffs.fitted_from),
        "r_squared": coeffs.diagnostics.r_squared,
    }


def report_payload(report: ProjectReport) -> dict[str, Any]:
    return {
        "project_id": report.project_id,
        "phases": [
            {
                "phase": p.phase.value,
                "di": p.di,
                "ipm": p.ipm,
                "band": band_label(p.band),
                "note": p.note,
            }
            for p in report.phases
        ],
        "avg_di": report.avg_di,
        "avg_di_band": band_label(report.avg_di_band),
        "avg_ipm": report.avg_ipm,
        "partial": report.partial,
        "total_person_hours": report.total_person_hours,
        "total_captured_pct": report.total_captured_pct,
    }
