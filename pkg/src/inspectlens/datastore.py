"""Flat-file persistence: project records, the bundled fixture, coefficients.

Records travel as CSV (one row per project/phase) or JSON (phases nested
under projects); both map to the same in-memory objects. Reals are written
with Python's shortest round-trip repr so files stay diff-friendly and
reload bit-exactly. No database, no network: files are the durable layer.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import json
import os
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .errors import (
    FixtureCorrupt,
    IoError,
    ParseError,
    SchemaVersionMismatch,
    ValidationError,
)
from .metrics import (
    DefectCounts,
    InspectionSession,
    Phase,
    PhaseObservation,
    ProjectRecord,
)
from .regression import CoefficientSet, FitDiagnostics, ModelKind

RECORDS_CSV_HEADER = [
    "project_id",
    "phase",
    "defects_inspection",
    "defects_total",
    "num_inspectors",
    "inspection_time_h",
    "prep_time_h",
    "experience_years",
    "function_points",
]

FIXTURE_CSV_HEADER = [
    "project_id",
    "total_person_hours",
    "di_req",
    "di_des",
    "di_imp",
    "avg_di",
    "ipm_req",
    "ipm_des",
    "ipm_imp",
    "avg_ipm",
    "tc_pct",
]

FIXTURE_FILENAME = "fixture_tables.csv"
FIXTURE_DIR_ENV = "INSPECTLENS_FIXTURE_DIR"
FIXTURE_SHA256 = "2eaeee910e0394804f66c4e22473316f8ca0e78dae8384c70f6d57bfa48e72c4"

COEFFS_SCHEMA_VERSION = 1
RECORDS_SCHEMA_VERSION = 1

# Tests pin timestamps through this env var (RFC 3339) instead of sampling.
NOW_ENV = "INSPECTLENS_NOW"


class RecordFormat(enum.Enum):
    CSV = "csv"
    JSON = "json"


def current_timestamp() -> datetime:
    """UTC now, unless INSPECTLENS_NOW pins a fixed RFC 3339 instant."""
    pinned = os.environ.get(NOW_ENV)
    if pinned:
        return _parse_rfc3339(pinned)
    return datetime.now(timezone.utc)


def _parse_rfc3339(text: str) -> datetime:
    try:
        return datetime.fromisoformat(text.replace("Z", "+00:00"))
    except ValueError as exc:
        raise ParseError(f"invalid RFC 3339 timestamp {text!r}: {exc}") from exc


def _format_rfc3339(ts: datetime) -> str:
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.isoformat()


def _num(value: float) -> Any:
    """Shortest lossless literal for CSV cells: ints stay ints."""
    if isinstance(value, float) and value.is_integer() and abs(value) < 1e15:
        return int(value)
    return repr(value) if isinstance(value, float) else value


def infer_format(path: str | Path) -> RecordFormat:
    suffix = Path(path).suffix.lower()
    if suffix == ".json":
        return RecordFormat.JSON
    if suffix == ".csv":
        return RecordFormat.CSV
    raise ParseError(f"cannot infer record format from suffix {suffix!r}; pass one explicitly")


# --- project records ------------------------------------------------------------


def load_records(path: str | Path, fmt: RecordFormat | None = None) -> list[ProjectRecord]:
    """Load and validate project records, collecting every violation found."""
    path = Path(path)
    if fmt is None:
        fmt = infer_format(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        return []
    if fmt is RecordFormat.CSV:
        return _records_from_csv(text)
    return _records_from_json(text)


def save_records(
    records: Sequence[ProjectRecord],
    path: str | Path,
    fmt: RecordFormat | None = None,
) -> None:
    """Write records; CSV carries phase data only (no hours/Tc metadata)."""
    path = Path(path)
    if fmt is None:
        fmt = infer_format(path)
    if fmt is RecordFormat.CSV:
        text = _records_to_csv(records)
    else:
        text = _records_to_json(records)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


_INT_FIELDS = ("defects_inspection", "defects_total", "num_inspectors")
_FLOAT_FIELDS = ("inspection_time_h", "prep_time_h", "experience_years", "function_points")


# 3 ints + 4 floats + phase: a fully parsed phase dict has this many keys
_PHASE_FIELD_COUNT = len(_INT_FIELDS) + len(_FLOAT_FIELDS) + 1


def _parse_phase_fields(
    raw: dict[str, Any],
    where: str,
    violations: list[tuple[str, str, str]],
) -> dict[str, Any]:
    """Type-check one phase's numeric fields; failed fields stay absent."""
    parsed: dict[str, Any] = {}
    for name in _INT_FIELDS:
        value = raw.get(name)
        try:
            if isinstance(value, bool) or (not isinstance(value, int) and not str(value).lstrip("-").isdigit()):
                raise ValueError
            parsed[name] = int(value)
        except (TypeError, ValueError):
            violations.append((where, name, f"must be an integer, got {value!r}"))
    for name in _FLOAT_FIELDS:
        value = raw.get(name)
        try:
            if isinstance(value, bool):
                raise ValueError
            parsed[name] = float(value)
        except (TypeError, ValueError):
            violations.append((where, name, f"must be a number, got {value!r}"))
    phase_code = raw.get("phase")
    try:
        parsed["phase"] = Phase(phase_code)
    except ValueError:
        violations.append(
            (where, "phase", f"must be one of req/des/imp, got {phase_code!r}")
        )
    return parsed


def _validate_phase(
    parsed: dict[str, Any],
    where: str,
    violations: list[tuple[str, str, str]],
) -> PhaseObservation | None:
    """Domain-check whichever fields parsed, so one bad cell hides nothing."""
    before = len(violations)
    found = parsed.get("defects_inspection")
    total = parsed.get("defects_total")
    if found is not None and found < 0:
        violations.append((where, "defects_inspection", "must be non-negative"))
    if total is not None:
        if total < 0:
            violations.append((where, "defects_total", "must be non-negative"))
        elif found is not None and found > total:
            violations.append(
                (
                    where,
                    "defects_inspection",
                    f"inspection count {found} exceeds total {total}",
                )
            )
    if "num_inspectors" in parsed and parsed["num_inspectors"] < 1:
        violations.append((where, "num_inspectors", "must be >= 1"))
    if "inspection_time_h" in parsed and not parsed["inspection_time_h"] > 0:
        violations.append((where, "inspection_time_h", "must be > 0"))
    if "prep_time_h" in parsed and parsed["prep_time_h"] < 0:
        violations.append((where, "prep_time_h", "must be >= 0"))
    if "experience_years" in parsed and parsed["experience_years"] < 0:
        violations.append((where, "experience_years", "must be >= 0"))
    if "function_points" in parsed and not parsed["function_points"] > 0:
        violations.append((where, "function_points", "must be > 0"))
    if len(violations) > before or len(parsed) != _PHASE_FIELD_COUNT:
        return None
    return PhaseObservation(
        phase=parsed["phase"],
        counts=DefectCounts(
            inspection_found=parsed["defects_inspection"],
            total_found=parsed["defects_total"],
        ),
        session=InspectionSession(
            num_inspectors=parsed["num_inspectors"],
            inspection_time=parsed["inspection_time_h"],
            prep_time=parsed["prep_time_h"],
            experience_level=parsed["experience_years"],
            function_points=parsed["function_points"],
        ),
    )


def _assemble_records(
    grouped: dict[str, dict[str, Any]],
    violations: list[tuple[str, str, str]],
) -> list[ProjectRecord]:
    if violations:
        raise ValidationError(violations)
    records = []
    for pid, info in grouped.items():
        records.append(
            ProjectRecord(
                id=pid,
                phases=tuple(info["phases"]),
                total_person_hours=info.get("total_person_hours"),
                total_captured_pct=info.get("total_captured_pct"),
            )
        )
    return records


def _records_from_csv(text: str) -> list[ProjectRecord]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        return []
    if header != RECORDS_CSV_HEADER:
        raise ParseError(
            "unexpected records CSV header; expected "
            f"{','.join(RECORDS_CSV_HEADER)!r}, got {','.join(header)!r}"
        )

    violations: list[tuple[str, str, str]] = []
    grouped: dict[str, dict[str, Any]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        where = f"row {lineno}"
        if len(row) != len(RECORDS_CSV_HEADER):
            raise ParseError(
                f"{where}: expected {len(RECORDS_CSV_HEADER)} fields, got {len(row)}"
            )
        raw = dict(zip(RECORDS_CSV_HEADER, (cell.strip() for cell in row)))
        pid = raw["project_id"]
        if not pid:
            violations.append((where, "project_id", "must be non-empty"))
            continue
        parsed = _parse_phase_fields(raw, where, violations)
        obs = _validate_phase(parsed, where, violations)
        if obs is None:
            continue
        info = grouped.setdefault(pid, {"phases": []})
        if any(existing.phase is obs.phase for existing in info["phases"]):
            violations.append(
                (where, "phase", f"duplicate phase {obs.phase.value!r} for project {pid!r}")
            )
            continue
        info["phases"].append(obs)
    return _assemble_records(grouped, violations)


def _records_to_csv(records: Sequence[ProjectRecord]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RECORDS_CSV_HEADER)
    for record in records:
        for obs in record.phases:
            writer.writerow(
                [
                    record.id,
                    obs.phase.value,
                    obs.counts.inspection_found,
                    obs.counts.total_found,
                    obs.session.num_inspectors,
                    _num(obs.session.inspection_time),
                    _num(obs.session.prep_time),
                    _num(obs.session.experience_level),
                    _num(obs.session.function_points),
                ]
            )
    return out.getvalue()


def _records_from_json(text: str) -> list[ProjectRecord]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "projects" not in doc:
        raise ParseError('records JSON must be an object with a "projects" array')
    version = doc.get("schema_version")
    if version != RECORDS_SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"records schema_version {version!r} is not supported "
            f"(supported: {RECORDS_SCHEMA_VERSION})"
        )
    projects = doc["projects"]
    if not isinstance(projects, list):
        raise ParseError('"projects" must be an array')

    violations: list[tuple[str, str, str]] = []
    grouped: dict[str, dict[str, Any]] = {}
    for i, proj in enumerate(projects):
        where = f"projects[{i}]"
        if not isinstance(proj, dict):
            raise ParseError(f"{where}: must be an object")
        pid = proj.get("id")
        if not pid or not isinstance(pid, str):
            violations.append((where, "id", f"must be a non-empty string, got {pid!r}"))
            continue
        if pid in grouped:
            violations.append((where, "id", f"duplicate project id {pid!r}"))
            continue
        info: dict[str, Any] = {"phases": []}
        hours = proj.get("total_person_hours")
        if hours is not None:
            if not isinstance(hours, (int, float)) or not hours > 0:
                violations.append((where, "total_person_hours", f"must be > 0, got {hours!r}"))
            else:
                info["total_person_hours"] = float(hours)
        tc = proj.get("total_captured_pct")
        if tc is not None:
            if not isinstance(tc, (int, float)) or not 0 <= tc <= 100:
                violations.append((where, "total_captured_pct", f"must be in [0, 100], got {tc!r}"))
            else:
                info["total_captured_pct"] = float(tc)
        phases = proj.get("phases", [])
        if not isinstance(phases, list):
            raise ParseError(f"{where}.phases: must be an array")
        for j, raw in enumerate(phases):
            pwhere = f"{where}.phases[{j}]"
            if not isinstance(raw, dict):
                raise ParseError(f"{pwhere}: must be an object")
            parsed = _parse_phase_fields(raw, pwhere, violations)
            obs = _validate_phase(parsed, pwhere, violations)
            if obs is None:
                continue
            if any(existing.phase is obs.phase for existing in info["phases"]):
                violations.append(
                    (pwhere, "phase", f"duplicate phase {obs.phase.value!r} for project {pid!r}")
                )
                continue
            info["phases"].append(obs)
        grouped[pid] = info
    return _assemble_records(grouped, violations)


def _records_to_json(records: Sequence[ProjectRecord]) -> str:
    projects = []
    for record in records:
        phases = []
        for obs in record.phases:
            phases.append(
                {
                    "phase": obs.phase.value,
                    "defects_inspection": obs.counts.inspection_found,
                    "defects_total": obs.counts.total_found,
                    "num_inspectors": obs.session.num_inspectors,
                    "inspection_time_h": obs.session.inspection_time,
                    "prep_time_h": obs.session.prep_time,
                    "experience_years": obs.session.experience_level,
                    "function_points": obs.session.function_points,
                }
            )
        projects.append(
            {
                "id": record.id,
                "total_person_hours": record.total_person_hours,
                "total_captured_pct": record.total_captured_pct,
                "phases": phases,
            }
        )
    doc = {"schema_version": RECORDS_SCHEMA_VERSION, "projects": projects}
    return json.dumps(doc, indent=2) + "\n"


# --- bundled fixture (published DI/IPM tables) -----------------------------------


@dataclass(frozen=True)
class FixtureRow:
    """One published project: phase DI/IPM values plus project metadata."""

    project_id: str
    total_person_hours: float
    di_req: float
    di_des: float
    di_imp: float
    avg_di: float
    ipm_req: float
    ipm_des: float
    ipm_imp: float
    avg_ipm: float
    tc_pct: float

    @property
    def di_phases(self) -> tuple[float, float, float]:
        return (self.di_req, self.di_des, self.di_imp)

    @property
    def ipm_phases(self) -> tuple[float, float, float]:
        return (self.ipm_req, self.ipm_des, self.ipm_imp)


def fixture_path() -> Path:
    """Bundled fixture location, or INSPECTLENS_FIXTURE_DIR override."""
    override = os.environ.get(FIXTURE_DIR_ENV)
    if override:
        return Path(override) / FIXTURE_FILENAME
    return Path(str(resources.files("inspectlens").joinpath("data", FIXTURE_FILENAME)))


def load_fixture() -> tuple[FixtureRow, ...]:
    """Load the 15 published projects; any edit to the file fails the checksum."""
    path = fixture_path()
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read fixture {path}: {exc}") from exc
    digest = hashlib.sha256(blob).hexdigest()
    if digest != FIXTURE_SHA256:
        raise FixtureCorrupt(
            f"fixture checksum mismatch for {path}: expected {FIXTURE_SHA256}, got {digest}"
        )

    reader = csv.reader(io.StringIO(blob.decode("utf-8")))
    header = next(reader)
    if header != FIXTURE_CSV_HEADER:
        raise FixtureCorrupt("fixture header does not match the documented schema")
    rows = []
    for row in reader:
        if not row:
            continue
        pid, *numbers = row
        values = [float(cell) for cell in numbers]
        rows.append(FixtureRow(pid, *values))
    if len(rows) != 15:
        raise FixtureCorrupt(f"fixture must hold exactly 15 projects, found {len(rows)}")
    for r in rows:
        for name in ("di_req", "di_des", "di_imp", "avg_di"):
            v = getattr(r, name)
            if not 0 <= v <= 1:
                raise FixtureCorrupt(f"{r.project_id}.{name} outside [0, 1]: {v}")
        for name in ("ipm_req", "ipm_des", "ipm_imp", "avg_ipm"):
            if getattr(r, name) < 0:
                raise FixtureCorrupt(f"{r.project_id}.{name} negative")
        if not 0 <= r.tc_pct <= 100:
            raise FixtureCorrupt(f"{r.project_id}.tc_pct outside [0, 100]: {r.tc_pct}")
    return tuple(rows)


# --- coefficient sets -------------------------------------------------------------


def coefficients_to_dict(coeffs: CoefficientSet) -> dict[str, Any]:
    d = coeffs.diagnostics
    return {
        "schema_version": COEFFS_SCHEMA_VERSION,
        "model": coeffs.model.value,
        "betas": list(coeffs.betas),
        "fitted_from": list(coeffs.fitted_from),
        "fitted_at": _format_rfc3339(coeffs.fitted_at),
        "diagnostics": {
            "residuals": list(d.residuals),
            "sse": d.sse,
            "r_squared": d.r_squared,
            "condition_estimate": d.condition_estimate,
            "degrees_of_freedom": d.degrees_of_freedom,
        },
    }


def coefficients_from_dict(doc: dict[str, Any]) -> CoefficientSet:
    version = doc.get("schema_version")
    if version != COEFFS_SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"coefficients schema_version {version!r} is not supported "
            f"(supported: {COEFFS_SCHEMA_VERSION})"
        )
    try:
        model = ModelKind(doc["model"])
        betas = tuple(float(v) for v in doc["betas"])
        fitted_from = tuple(str(s) for s in doc["fitted_from"])
        fitted_at = _parse_rfc3339(doc["fitted_at"])
        diag = doc["diagnostics"]
        diagnostics = FitDiagnostics(
            residuals=tuple(float(v) for v in diag["residuals"]),
            sse=float(diag["sse"]),
            r_squared=float(diag["r_squared"]),
            condition_estimate=float(diag["condition_estimate"]),
            degrees_of_freedom=int(diag["degrees_of_freedom"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed coefficients document: {exc!r}") from exc
    if len(betas) != model.n_coefficients:
        raise SchemaVersionMismatch(
            f"{model.value} model declares {model.n_coefficients} coefficients "
            f"but file holds {len(betas)}"
        )
    return CoefficientSet(
        model=model,
        betas=betas,
        fitted_from=fitted_from,
        fitted_at=fitted_at,
        diagnostics=diagnostics,
    )


def save_coefficients(coeffs: CoefficientSet, path: str | Path) -> None:
    path = Path(path)
    try:
        path.write_text(json.dumps(coefficients_to_dict(coeffs), indent=2) + "\n",
                        encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_coefficients(path: str | Path) -> CoefficientSet:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: coefficients document must be a JSON object")
    return coefficients_from_dict(doc)
