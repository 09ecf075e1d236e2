"""What-if tooling: invert one regressor toward a target and scan ranges.

Quality managers use this to answer "how many inspectors (or hours, or years
of experience) would it take to reach that DI band?". Only single-parameter
inversion is supported; multi-parameter search is underdetermined and the
choice between trade-offs is left to the user.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from .errors import ArityMismatch, EmptyGrid, UnsolvableParameter
from .metrics import Band
from .regression import (
    REGRESSOR_NAMES,
    CoefficientSet,
    ModelKind,
    PredictionResult,
    RegressorVector,
    predict,
)

# Relative fuzz when deciding whether a grid point still lies inside the range.
_GRID_EPS = 1e-9


def _check_indices(model: ModelKind, chosen: int, fixed: Mapping[int, float]) -> None:
    arity = model.n_regressors
    if not 1 <= chosen <= arity:
        raise ArityMismatch(
            f"regressor index must be in 1..{arity} for the {model.value} model, "
            f"got {chosen}"
        )
    expected = set(range(1, arity + 1)) - {chosen}
    got = set(fixed)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        parts = []
        if missing:
            parts.append("missing fixed regressors: " + ", ".join(f"x{i}" for i in missing))
        if extra:
            parts.append("unexpected regressors: " + ", ".join(f"x{i}" for i in extra))
        raise ArityMismatch("; ".join(parts))


def _assemble(model: ModelKind, values: Mapping[int, float]) -> RegressorVector:
    x5 = values.get(5) if model is ModelKind.TEAM else None
    return RegressorVector(
        x1=values[1], x2=values[2], x3=values[3], x4=values[4], x5=x5
    )


def _value_feasible(index: int, value: float) -> bool:
    if not math.isfinite(value):
        return False
    if index == 1:
        return value > 0
    if index == 2 or index == 4:
        return value >= 0
    if index == 3:
        return value >= 1
    return True  # x5 is a log scale: any finite real corresponds to positive FP


@dataclass(frozen=True)
class TuneRequest:
    """Solve one regressor so the model output hits ``target_y``.

    ``solve_for`` is the regressor index (1-based); ``fixed`` must supply
    values for exactly the remaining regressors of the model.
    """

    coeffs: CoefficientSet
    target_y: float
    solve_for: int
    fixed: Mapping[int, float]


@dataclass(frozen=True)
class IntegerCandidate:
    """A rounded inspector-count alternative with its predicted outcome."""

    value: int
    y_raw: float
    band: Band | None
    feasible: bool


@dataclass(frozen=True)
class TuneResult:
    """Solved regressor value plus feasibility and the resulting band.

    ``feasible`` is False when the solved value breaks the regressor's
    domain (negative hours, under one inspector); the value is still
    returned so managers can see why the target is unreachable.
    ``integer_candidates`` is populated only when solving for the inspector
    count, which must be whole in practice.
    """

    value: float
    feasible: bool
    band: Band | None
    integer_candidates: tuple[IntegerCandidate, ...] | None = None


def solve_parameter(req: TuneRequest) -> TuneResult:
    """Invert the fitted linear form for one regressor.

    value = (target - beta0 - sum of fixed contributions) / beta_j. Raises
    UnsolvableParameter when beta_j is exactly zero: that regressor cannot
    influence the target at all.
    """
    model = req.coeffs.model
    _check_indices(model, req.solve_for, req.fixed)
    betas = req.coeffs.betas
    beta_j = betas[req.solve_for]
    if beta_j == 0.0:
        raise UnsolvableParameter(
            f"coefficient for x{req.solve_for} ({REGRESSOR_NAMES[req.solve_for]}) "
            "is zero; it cannot influence the target"
        )

    rest = sum(betas[i] * v for i, v in req.fixed.items())
    value = (req.target_y - betas[0] - rest) / beta_j

    assembled = _assemble(model, {**dict(req.fixed), req.solve_for: value})
    prediction = predict(req.coeffs, assembled)

    candidates = None
    if req.solve_for == 3 and math.isfinite(value):
        ints = sorted({math.floor(value), math.ceil(value)})
        candidates = tuple(
            _integer_candidate(req, k) for k in ints
        )
    return TuneResult(
        value=value,
        feasible=_value_feasible(req.solve_for, value),
        band=prediction.band,
        integer_candidates=candidates,
    )


def _integer_candidate(req: TuneRequest, k: int) -> IntegerCandidate:
    x = _assemble(req.coeffs.model, {**dict(req.fixed), req.solve_for: float(k)})
    p = predict(req.coeffs, x)
    return IntegerCandidate(
        value=k, y_raw=p.y_raw, band=p.band, feasible=_value_feasible(3, float(k))
    )


@dataclass(frozen=True)
class ScanRequest:
    """Sweep one regressor over [vmin, vmax] in steps of ``step``."""

    coeffs: CoefficientSet
    vary: int
    vmin: float
    vmax: float
    step: float
    fixed: Mapping[int, float]


@dataclass(frozen=True)
class ScanPoint:
    value: float
    y_raw: float
    band: Band | None


def scan(req: ScanRequest) -> tuple[ScanPoint, ...]:
    """Evaluate the model over an ascending grid, inclusive of vmin.

    Grid points are vmin + k*step for k = 0, 1, ... while they stay inside
    [vmin, vmax]; a step wider than the range yields the single point vmin.
    Every entry equals ``predict`` at that point.
    """
    _check_indices(req.coeffs.model, req.vary, req.fixed)
    if not req.step > 0:
        raise ValueError(f"step must be > 0, got {req.step}")
    span = req.vmax - req.vmin
    if math.ceil(span / req.step) <= 0:
        raise EmptyGrid(
            f"scan range [{req.vmin}, {req.vmax}] with step {req.step} has no points"
        )

    count = int(math.floor(span / req.step + _GRID_EPS)) + 1
    points = []
    for k in range(count):
        value = req.vmin + k * req.step
        x = _assemble(req.coeffs.model, {**dict(req.fixed), req.vary: value})
        p = predict(req.coeffs, x)
        points.append(ScanPoint(value=value, y_raw=p.y_raw, band=p.band))
    return tuple(points)


def band_threshold(
    coeffs: CoefficientSet,
    band_lower: float,
    solve_for: int,
    fixed: Mapping[int, float],
) -> float:
    """The regressor value at which the raw prediction first reaches a band.

    Definitionally solve_parameter with the band's lower bound as the target;
    only meaningful for the process model, whose output is banded.
    """
    if coeffs.model is not ModelKind.PROCESS:
        raise ArityMismatch("band thresholds apply to the process (DI) model only")
    result = solve_parameter(
        TuneRequest(coeffs=coeffs, target_y=band_lower, solve_for=solve_for, fixed=fixed)
    )
    return result.value


def prediction_for(
    coeffs: CoefficientSet, values: Mapping[int, float]
) -> PredictionResult:
    """Predict from a complete index -> value mapping (planner convenience)."""
    arity = coeffs.model.n_regressors
    expected = set(range(1, arity + 1))
    if set(values) != expected:
        raise ArityMismatch(
            f"expected values for exactly x1..x{arity}, got "
            + (", ".join(f"x{i}" for i in sorted(values)) or "none")
        )
    return predict(coeffs, _assemble(coeffs.model, values))
