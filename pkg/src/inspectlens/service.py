"""JSON-over-HTTP what-if service.

Stateless by design: the only mutable state is a registry of immutable
coefficient sets keyed by content-hash id, so registration is idempotent and
a restart simply forgets them (coefficient files are the durable layer).
Every math endpoint delegates to the same library calls the CLI uses and
serializes through the shared wire module, keeping the two front ends in
exact agreement.
"""

from __future__ import annotations

import threading
from typing import Literal, Mapping, Sequence

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from . import __version__, wire
from .datastore import current_timestamp
from .errors import ArityMismatch, InspectLensError
from .metrics import BAND_TABLE
from .planner import ScanRequest, TuneRequest, prediction_for, scan, solve_parameter
from .regression import (
    CoefficientSet,
    ModelKind,
    RegressorVector,
    build_design_matrix,
    fit_least_squares,
)


class FitRow(BaseModel):
    x1: float
    x2: float
    x3: float
    x4: float
    x5: float | None = None
    y: float
    label: str | None = None


class FitBody(BaseModel):
    model: Literal["process", "team"]
    rows: list[FitRow]


class PredictBody(BaseModel):
    coeff_id: str
    x: dict[str, float]


class TuneBody(BaseModel):
    coeff_id: str
    target: float
    solve_for: int = Field(ge=1, le=5)
    fixed: dict[str, float]


class ScanBody(BaseModel):
    coeff_id: str
    vary: int = Field(ge=1, le=5)
    min: float
    max: float
    step: float = Field(gt=0)
    fixed: dict[str, float]


class ApiState:
    """Registered coefficient sets, keyed by content-hash id.

    Sets are immutable snapshots; ``register`` is an atomic insert-if-absent,
    so re-registering identical content returns the existing id and no request
    ever observes a partially registered set.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sets: dict[str, CoefficientSet] = {}

    def register(self, coeffs: CoefficientSet) -> str:
        cid = wire.coefficient_id(coeffs)
        with self._lock:
            self._sets.setdefault(cid, coeffs)
        return cid

    def get(self, cid: str) -> CoefficientSet:
        with self._lock:
            coeffs = self._sets.get(cid)
        if coeffs is None:
            raise HTTPException(
                status_code=404,
                detail={
                    "error_class": "UnknownCoefficientId",
                    "message": f"no coefficient set registered under id {cid!r}",
                },
            )
        return coeffs

    def summaries(self) -> list[dict]:
        with self._lock:
            items = list(self._sets.values())
        return [wire.coefficient_summary(c) for c in items]


def _client_error(exc: InspectLensError) -> HTTPException:
    """422 with a machine-readable error class, mirroring the CLI exit codes."""
    return HTTPException(
        status_code=422,
        detail={"error_class": type(exc).__name__, "message": str(exc)},
    )


def _index_map(values: Mapping[str, float]) -> dict[int, float]:
    """Wire keys x1..x5 -> regressor indices; arity itself is checked downstream."""
    out: dict[int, float] = {}
    for key, value in values.items():
        if len(key) != 2 or key[0] != "x" or key[1] not in "12345":
            raise ArityMismatch(f"unknown regressor key {key!r}; expected x1..x5")
        out[int(key[1])] = float(value)
    return out


def _validate_band_table() -> None:
    bands = BAND_TABLE
    tiles = (
        len(bands) == 10
        and bands[0].lower == 0.0
        and bands[-1].upper == 1.0
        and all(a.upper == b.lower for a, b in zip(bands, bands[1:]))
    )
    if not tiles:
        raise RuntimeError("band table does not tile [0, 1] in ten intervals")


def create_app(
    initial_sets: Sequence[CoefficientSet] = (),
    cors_origins: Sequence[str] = (),
) -> FastAPI:
    """Build the service with optional preloaded coefficient sets."""
    _validate_band_table()
    state = ApiState()
    for coeffs in initial_sets:
        state.register(coeffs)

    app = FastAPI(title="inspectlens", version=__version__)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.get("/api/v1/bands")
    def bands() -> list[dict]:
        return wire.bands_payload()

    @app.get("/api/v1/coefficients")
    def coefficients() -> list[dict]:
        return state.summaries()

    @app.post("/api/v1/fit")
    def fit(body: FitBody) -> dict:
        model = ModelKind(body.model)
        observations = []
        labels = []
        for i, row in enumerate(body.rows):
            vec = RegressorVector(x1=row.x1, x2=row.x2, x3=row.x3, x4=row.x4, x5=row.x5)
            observations.append((vec, row.y))
            labels.append(row.label or f"row{i + 1}")
        try:
            dm = build_design_matrix(observations, model, labels=labels)
            coeffs = fit_least_squares(dm, fitted_at=current_timestamp())
        except InspectLensError as exc:
            raise _client_error(exc) from exc
        state.register(coeffs)
        return wire.fit_payload(coeffs)

    @app.post("/api/v1/predict")
    def predict(body: PredictBody) -> dict:
        coeffs = state.get(body.coeff_id)
        try:
            result = prediction_for(coeffs, _index_map(body.x))
        except InspectLensError as exc:
            raise _client_error(exc) from exc
        return wire.prediction_payload(result)

    @app.post("/api/v1/tune")
    def tune(body: TuneBody) -> dict:
        coeffs = state.get(body.coeff_id)
        try:
            result = solve_parameter(
                TuneRequest(
                    coeffs=coeffs,
                    target_y=body.target,
                    solve_for=body.solve_for,
                    fixed=_index_map(body.fixed),
                )
            )
        except InspectLensError as exc:
            raise _client_error(exc) from exc
        return wire.tune_payload(result)

    @app.post("/api/v1/scan")
    def scan_endpoint(body: ScanBody) -> dict:
        coeffs = state.get(body.coeff_id)
        try:
            points = scan(
                ScanRequest(
                    coeffs=coeffs,
                    vary=body.vary,
                    vmin=body.min,
                    vmax=body.max,
                    step=body.step,
                    fixed=_index_map(body.fixed),
                )
            )
        except InspectLensError as exc:
            raise _client_error(exc) from exc
        return wire.scan_payload(points)

    return app
