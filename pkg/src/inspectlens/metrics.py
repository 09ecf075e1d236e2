"""Core inspection metrics: DI, IPM, aggregation, and performance bands.

DI (depth of inspection) is the fraction of all captured defects that the
inspection process found on its own. IPM (inspection performance metric) is
defects found by inspection per person-hour of inspection effort. Both are
computed from shop-floor counts; everything here is pure and thread-safe.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import EmptyInput, MissingCounts, OutOfDomain, UndefinedMetric


class Phase(enum.Enum):
    """Development phase an inspection observation belongs to."""

    REQUIREMENTS = "req"
    DESIGN = "des"
    IMPLEMENTATION = "imp"


PHASE_ORDER: tuple[Phase, ...] = (
    Phase.REQUIREMENTS,
    Phase.DESIGN,
    Phase.IMPLEMENTATION,
)


def _require_count(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}")


@dataclass(frozen=True)
class DefectCounts:
    """Defect tallies for one inspected work product.

    ``inspection_found`` is the count captured by inspection alone;
    ``total_found`` is the count captured by inspection and testing together,
    so ``inspection_found <= total_found`` always holds.
    """

    inspection_found: int
    total_found: int

    def __post_init__(self):
        _require_count("inspection_found", self.inspection_found)
        _require_count("total_found", self.total_found)
        if self.inspection_found > self.total_found:
            raise ValueError(
                f"inspection_found ({self.inspection_found}) cannot exceed "
                f"total_found ({self.total_found})"
            )


@dataclass(frozen=True)
class InspectionSession:
    """Who inspected and for how long.

    Times are person-hours taken per person; total effort multiplies by the
    head count. ``experience_level`` is years of relevant experience and is
    treated as an opaque scalar by all downstream math.
    """

    num_inspectors: int
    inspection_time: float
    prep_time: float
    experience_level: float
    function_points: float

    def __post_init__(self):
        if isinstance(self.num_inspectors, bool) or not isinstance(self.num_inspectors, int):
            raise ValueError(f"num_inspectors must be an integer, got {self.num_inspectors!r}")
        if self.num_inspectors < 1:
            raise ValueError(f"num_inspectors must be >= 1, got {self.num_inspectors}")
        if not self.inspection_time > 0:
            raise ValueError(f"inspection_time must be > 0, got {self.inspection_time}")
        if self.prep_time < 0:
            raise ValueError(f"prep_time must be >= 0, got {self.prep_time}")
        if self.experience_level < 0:
            raise ValueError(f"experience_level must be >= 0, got {self.experience_level}")
        if not self.function_points > 0:
            raise ValueError(f"function_points must be > 0, got {self.function_points}")

    @property
    def effort(self) -> float:
        """Total inspection effort in person-hours: N * (It + Pt)."""
        return self.num_inspectors * (self.inspection_time + self.prep_time)


@dataclass(frozen=True)
class PhaseObservation:
    """One phase's defect counts plus the session that produced them."""

    phase: Phase
    counts: DefectCounts
    session: InspectionSession


@dataclass(frozen=True)
class ProjectRecord:
    """One project's metadata and its per-phase observations.

    ``total_person_hours`` and ``total_captured_pct`` (Tc) are opaque
    metadata: neither enters any metric computation. The records CSV schema
    cannot carry them, so both are optional.
    """

    id: str
    phases: tuple[PhaseObservation, ...]
    total_person_hours: float | None = None
    total_captured_pct: float | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("project id must be non-empty")
        object.__setattr__(self, "phases", tuple(self.phases))
        seen = set()
        for obs in self.phases:
            if obs.phase in seen:
                raise ValueError(f"project {self.id}: duplicate phase {obs.phase.value}")
            seen.add(obs.phase)
        if self.total_person_hours is not None and not self.total_person_hours > 0:
            raise ValueError(f"total_person_hours must be > 0, got {self.total_person_hours}")
        if self.total_captured_pct is not None and not 0 <= self.total_captured_pct <= 100:
            raise ValueError(f"total_captured_pct must be in [0, 100], got {self.total_captured_pct}")


# --- performance bands --------------------------------------------------------


class BandLabel(enum.IntEnum):
    """The ten DI performance labels, totally ordered worst to best."""

    WORSE = 0
    VERY_LOW = 1
    LOW = 2
    NORMAL = 3
    ABOVE_NORMAL = 4
    HIGH = 5
    VERY_HIGH = 6
    BEST = 7
    EXCELLENT = 8
    IDEAL = 9

    @property
    def text(self) -> str:
        """Canonical display/serialization form, e.g. ``"AboveNormal"``."""
        return _LABEL_TEXT[self]

    @classmethod
    def from_text(cls, text: str) -> "BandLabel":
        try:
            return _TEXT_LABEL[text]
        except KeyError:
            raise ValueError(f"unknown band label {text!r}") from None


_LABEL_TEXT = {
    BandLabel.WORSE: "Worse",
    BandLabel.VERY_LOW: "VeryLow",
    BandLabel.LOW: "Low",
    BandLabel.NORMAL: "Normal",
    BandLabel.ABOVE_NORMAL: "AboveNormal",
    BandLabel.HIGH: "High",
    BandLabel.VERY_HIGH: "VeryHigh",
    BandLabel.BEST: "Best",
    BandLabel.EXCELLENT: "Excellent",
    BandLabel.IDEAL: "Ideal",
}
_TEXT_LABEL = {text: label for label, text in _LABEL_TEXT.items()}


@dataclass(frozen=True)
class Band:
    """A DI interval with its performance label.

    Intervals are half-open ``[lower, upper)`` except the top band, which is
    closed at 1.0 so the ten bands tile [0, 1] exactly.
    """

    label: BandLabel
    lower: float
    upper: float

    def contains(self, di: float) -> bool:
        if self.label is BandLabel.IDEAL:
            return self.lower <= di <= self.upper
        return self.lower <= di < self.upper


BAND_TABLE: tuple[Band, ...] = tuple(
    Band(BandLabel(i), i / 10, (i + 1) / 10) for i in range(10)
)


def classify_band(di: float) -> Band:
    """Map a DI value in [0, 1] onto its performance band.

    Raises OutOfDomain for values outside [0, 1] (including NaN).
    """
    if math.isnan(di) or di < 0.0 or di > 1.0:
        raise OutOfDomain(f"DI must be in [0, 1], got {di}")
    for band in BAND_TABLE:
        if band.contains(di):
            return band
    raise OutOfDomain(f"DI must be in [0, 1], got {di}")  # unreachable


# --- metric operations --------------------------------------------------------


def compute_di(counts: DefectCounts) -> float:
    """Depth of inspection: inspection_found / total_found.

    Raises UndefinedMetric when no defects were observed at all; a 0/0 never
    silently becomes NaN.
    """
    if counts.total_found == 0:
        raise UndefinedMetric("DI is undefined: no defects observed (total_found = 0)")
    return counts.inspection_found / counts.total_found


def compute_ipm(n_i: int, session: InspectionSession) -> float:
    """Inspection performance: defects found by inspection per person-hour."""
    _require_count("n_i", n_i)
    effort = session.effort
    if effort <= 0:
        raise UndefinedMetric("IPM is undefined: inspection effort is zero")
    return n_i / effort


class Aggregation(enum.Enum):
    """How per-phase metric values roll up to a project figure."""

    MEAN_OF_PHASES = "mean_of_phases"
    POOLED_COUNTS = "pooled_counts"


def aggregate_metric(
    values: list[float],
    mode: Aggregation = Aggregation.MEAN_OF_PHASES,
    counts: list[DefectCounts] | None = None,
) -> float:
    """Aggregate per-phase metric values.

    MEAN_OF_PHASES is the unweighted arithmetic mean (the published Avg
    convention). POOLED_COUNTS recomputes the ratio from summed counts and
    needs ``counts`` aligned one-to-one with ``values``.
    """
    if not values:
        raise EmptyInput("cannot aggregate an empty list of values")
    if mode is Aggregation.MEAN_OF_PHASES:
        return sum(values) / len(values)
    if counts is None:
        raise MissingCounts("pooled aggregation requires defect counts")
    if len(counts) != len(values):
        raise MissingCounts(
            f"counts must align with values: {len(counts)} counts for {len(values)} values"
        )
    total = sum(c.total_found for c in counts)
    if total == 0:
        raise UndefinedMetric("pooled DI is undefined: no defects observed in any phase")
    return sum(c.inspection_found for c in counts) / total


# --- project reports ----------------------------------------------------------


@dataclass(frozen=True)
class PhaseReport:
    """Metric values for one phase; ``di`` is None when undefined."""

    phase: Phase
    di: float | None
    ipm: float
    band: Band | None
    note: str | None = None


@dataclass(frozen=True)
class ProjectReport:
    """Per-phase metrics plus project-level averages and banding.

    ``partial`` is set when at least one phase had an undefined DI, in which
    case ``avg_di`` covers the remaining phases only (None if none remain).
    IPM is defined for every valid session, so ``avg_ipm`` always covers all
    phases.
    """

    project_id: str
    phases: tuple[PhaseReport, ...]
    avg_di: float | None
    avg_di_band: Band | None
    avg_ipm: float
    partial: bool
    total_person_hours: float | None = None
    total_captured_pct: float | None = None


def project_report(record: ProjectRecord) -> ProjectReport:
    """Compose DI, IPM, aggregation and banding for one project.

    Phases with zero observed defects get an undefined DI (with a note) and
    are excluded from the DI average; the report is then flagged partial.
    """
    if not record.phases:
        raise EmptyInput(f"project {record.id}: no phase observations")

    ordered = sorted(record.phases, key=lambda obs: PHASE_ORDER.index(obs.phase))
    phase_reports = []
    di_values: list[float] = []
    ipm_values: list[float] = []
    for obs in ordered:
        ipm = compute_ipm(obs.counts.inspection_found, obs.session)
        ipm_values.append(ipm)
        try:
            di = compute_di(obs.counts)
        except UndefinedMetric as exc:
            phase_reports.append(
                PhaseReport(
                    phase=obs.phase,
                    di=None,
                    ipm=ipm,
                    band=None,
                    note=f"{record.id}/{obs.phase.value}: {exc}",
                )
            )
            continue
        di_values.append(di)
        phase_reports.append(
            PhaseReport(phase=obs.phase, di=di, ipm=ipm, band=classify_band(di))
        )

    partial = len(di_values) < len(ordered)
    avg_di = aggregate_metric(di_values) if di_values else None
    # the mean of in-range values can drift past 1.0 by one ulp; clamp for banding
    avg_band = classify_band(min(max(avg_di, 0.0), 1.0)) if avg_di is not None else None
    return ProjectReport(
        project_id=record.id,
        phases=tuple(phase_reports),
        avg_di=avg_di,
        avg_di_band=avg_band,
        avg_ipm=aggregate_metric(ipm_values),
        partial=partial,
        total_person_hours=record.total_person_hours,
        total_captured_pct=record.total_captured_pct,
    )
