"""Command-line front door.

All math lives in the library modules; this file parses flags, renders
table/json/csv output, and maps library errors onto exit codes so scripts
can branch on the failure class:

    0  success
    2  bad input (parse, validation, domain, arity)
    3  not enough data rows for the requested model
    4  numerical failure (rank-deficient design, unsolvable parameter)
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
import warnings

import click

from . import __version__, wire
from .datastore import (
    RecordFormat,
    current_timestamp,
    load_coefficients,
    load_fixture,
    load_records,
    save_coefficients,
)
from .errors import (
    InsufficientRows,
    InspectLensError,
    RankDeficient,
    UnsolvableParameter,
)
from .metrics import aggregate_metric, classify_band, project_report
from .planner import ScanRequest, TuneRequest, prediction_for, scan, solve_parameter
from .regression import (
    FitGranularity,
    ModelKind,
    build_design_matrix,
    fit_least_squares,
    training_rows_from_records,
)

EXIT_INPUT = 2
EXIT_INSUFFICIENT_DATA = 3
EXIT_NUMERICAL = 4


def _exit_code(exc: InspectLensError) -> int:
    if isinstance(exc, InsufficientRows):
        return EXIT_INSUFFICIENT_DATA
    if isinstance(exc, (RankDeficient, UnsolvableParameter)):
        return EXIT_NUMERICAL
    return EXIT_INPUT


def handle_errors(fn):
    """Turn library errors into stderr diagnostics plus a classed exit code."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InspectLensError as exc:
            click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(_exit_code(exc))

    return wrapper


def _fmt(value) -> str:
    """Human-readable cell for table output (machine formats use repr/json)."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _raw(value) -> str:
    """Full-precision cell for CSV output."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_table(header: list[str], rows: list[list]) -> str:
    cells = [[_fmt(v) for v in row] for row in rows]
    widths = [
        max(len(header[i]), *(len(row[i]) for row in cells)) if cells else len(header[i])
        for i in range(len(header))
    ]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def render_csv(header: list[str], rows: list[list]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_raw(v) for v in row])
    return out.getvalue().rstrip("\n")


def emit(ctx, payload, header: list[str], rows: list[list]) -> None:
    """Print one result in the session's output format."""
    fmt = ctx.obj["format"]
    if fmt == "json":
        click.echo(json.dumps(payload, indent=2))
    elif fmt == "csv":
        click.echo(render_csv(header, rows))
    else:
        click.echo(render_table(header, rows))


def note(ctx, message: str) -> None:
    """Informational stderr line, silenced by --quiet."""
    if not ctx.obj["quiet"]:
        click.echo(message, err=True)


@click.group()
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "json", "csv"]),
    default="table",
    show_default=True,
    help="Output format for every subcommand.",
)
@click.option("--quiet", is_flag=True, help="Suppress warnings and notes on stderr.")
@click.version_option(version=__version__, prog_name="inspectlens")
@click.pass_context
def main(ctx, fmt, quiet):
    """Inspection analytics: defect metrics, performance bands, model fitting,
    and what-if planning for software inspections."""
    ctx.obj = {"format": fmt, "quiet": quiet}


# --- shared option plumbing -------------------------------------------------

_X_HELP = {
    1: "Inspection time per person (hours).",
    2: "Preparation time per person (hours).",
    3: "Number of inspectors.",
    4: "Experience level (years).",
    5: "Log10 of function points (team model only).",
}


def x_options(fn):
    for i in sorted(_X_HELP, reverse=True):
        fn = click.option(f"--x{i}", type=float, default=None, help=_X_HELP[i])(fn)
    return fn


def collect_x(x1, x2, x3, x4, x5) -> dict[int, float]:
    values = (x1, x2, x3, x4, x5)
    return {i: v for i, v in enumerate(values, start=1) if v is not None}


def _records_source(input_path, fixture):
    if fixture == (input_path is not None):
        raise click.UsageError("provide exactly one of --input or --fixture")


# --- metrics / report -------------------------------------------------------


def _fixture_payload() -> list[dict]:
    """Recompute phase averages and bands from the published per-phase values."""
    out = []
    for row in load_fixture():
        avg_di = aggregate_metric(list(row.di_phases))
        avg_ipm = aggregate_metric(list(row.ipm_phases))
        out.append(
            {
                "project_id": row.project_id,
                "phases": [
                    {
                        "phase": phase,
                        "di": di,
                        "ipm": ipm,
                        "band": classify_band(di).label.text,
                    }
                    for phase, di, ipm in zip(
                        ("req", "des", "imp"), row.di_phases, row.ipm_phases
                    )
                ],
                "avg_di": avg_di,
                "avg_di_band": classify_band(avg_di).label.text,
                "avg_ipm": avg_ipm,
                "published_avg_di": row.avg_di,
                "published_avg_ipm": row.avg_ipm,
                "total_person_hours": row.total_person_hours,
                "total_captured_pct": row.tc_pct,
            }
        )
    return out


def _record_payload(input_path) -> list[dict]:
    records = load_records(input_path)
    return [wire.report_payload(project_report(r)) for r in records]


def _metric_rows(payload: list[dict], granularity: str):
    if granularity == "phase":
        header = ["project", "phase", "di", "band", "ipm", "note"]
        rows = [
            [
                proj["project_id"],
                ph["phase"],
                ph["di"],
                ph["band"],
                ph["ipm"],
                ph.get("note"),
            ]
            for proj in payload
            for ph in proj["phases"]
        ]
        return header, rows
    header = ["project", "avg_di", "band", "avg_ipm", "partial"]
    rows = [
        [
            proj["project_id"],
            proj["avg_di"],
            proj["avg_di_band"],
            proj["avg_ipm"],
            proj.get("partial", False),
        ]
        for proj in payload
    ]
    return header, rows


@main.command()
@click.option("--input", "input_path", type=click.Path(), default=None,
              help="Project records file (.csv or .json).")
@click.option("--fixture", is_flag=True,
              help="Use the bundled published dataset instead of --input.")
@click.option("--granularity", type=click.Choice(["project", "phase"]),
              default="project", show_default=True,
              help="Summarize per project or per phase (table/csv output).")
@click.pass_context
@handle_errors
def metrics(ctx, input_path, fixture, granularity):
    """Compute DI, IPM, and performance bands for project records."""
    _records_source(input_path, fixture)
    payload = _fixture_payload() if fixture else _record_payload(input_path)
    for proj in payload:
        for ph in proj["phases"]:
            if ph.get("note"):
                note(ctx, f"warning: {proj['project_id']}/{ph['phase']}: {ph['note']}")
    header, rows = _metric_rows(payload, granularity)
    emit(ctx, payload, header, rows)


@main.command()
@click.option("--input", "input_path", type=click.Path(), default=None,
              help="Project records file (.csv or .json).")
@click.option("--fixture", is_flag=True,
              help="Use the bundled published dataset instead of --input.")
@click.pass_context
@handle_errors
def report(ctx, input_path, fixture):
    """Full per-project detail: phase metrics, averages, and metadata."""
    _records_source(input_path, fixture)
    payload = _fixture_payload() if fixture else _record_payload(input_path)
    if ctx.obj["format"] != "table":
        header, rows = _metric_rows(payload, "phase")
        emit(ctx, payload, header, rows)
        return
    blocks = []
    for proj in payload:
        lines = [f"project {proj['project_id']}"]
        for key in ("total_person_hours", "total_captured_pct"):
            if proj.get(key) is not None:
                lines.append(f"  {key}: {_fmt(proj[key])}")
        for ph in proj["phases"]:
            di = _fmt(ph["di"])
            band = ph["band"] or "-"
            lines.append(
                f"  {ph['phase']}: di={di} ({band})  ipm={_fmt(ph['ipm'])}"
                + (f"  [{ph['note']}]" if ph.get("note") else "")
            )
        band = proj["avg_di_band"] or "-"
        lines.append(
            f"  average: di={_fmt(proj['avg_di'])} ({band})  ipm={_fmt(proj['avg_ipm'])}"
            + ("  [partial]" if proj.get("partial") else "")
        )
        blocks.append("\n".join(lines))
    click.echo("\n\n".join(blocks))


# --- fit ---------------------------------------------------------------------


@main.command()
@click.option("--input", "input_path", type=click.Path(), required=True,
              help="Historical project records (.csv or .json).")
@click.option("--model", "model_name", type=click.Choice(["process", "team"]),
              required=True, help="process fits DI; team fits IPM.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the fitted coefficient set to this JSON file.")
@click.option("--granularity", type=click.Choice(["project", "phase"]),
              default="project", show_default=True,
              help="One training row per project, or one per phase.")
@click.pass_context
@handle_errors
def fit(ctx, input_path, model_name, out_path, granularity):
    """Fit model coefficients from historical records by least squares."""
    records = load_records(input_path)
    model = ModelKind(model_name)
    observations, labels = training_rows_from_records(
        records, model, FitGranularity(granularity)
    )
    dm = build_design_matrix(observations, model, labels=labels)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        coeffs = fit_least_squares(dm, fitted_at=current_timestamp())
    for w in caught:
        note(ctx, f"warning: {w.message}")
    if out_path:
        save_coefficients(coeffs, out_path)
        note(ctx, f"wrote {out_path}")

    d = coeffs.diagnostics
    payload = wire.fit_payload(coeffs)
    header = ["coefficient", "value"]
    rows = [[f"beta{i}", b] for i, b in enumerate(coeffs.betas)]
    rows.append(["sse", d.sse])
    rows.append(["r_squared", d.r_squared])
    rows.append(["condition_estimate", d.condition_estimate])
    rows.append(["degrees_of_freedom", d.degrees_of_freedom])
    emit(ctx, payload, header, rows)


# --- predict / tune / scan ----------------------------------------------------


@main.command()
@click.option("--coeffs", "coeffs_path", type=click.Path(), required=True,
              help="Coefficient set JSON written by fit.")
@x_options
@click.pass_context
@handle_errors
def predict(ctx, coeffs_path, x1, x2, x3, x4, x5):
    """Predict the metric value for one parameter vector."""
    coeffs = load_coefficients(coeffs_path)
    result = prediction_for(coeffs, collect_x(x1, x2, x3, x4, x5))
    payload = wire.prediction_payload(result)
    header = ["y_raw", "y_clamped", "band", "out_of_range"]
    rows = [[payload["y_raw"], payload["y_clamped"], payload["band"],
             payload["out_of_range"]]]
    emit(ctx, payload, header, rows)


@main.command()
@click.option("--coeffs", "coeffs_path", type=click.Path(), required=True,
              help="Coefficient set JSON written by fit.")
@click.option("--target", type=float, required=True, help="Desired metric value.")
@click.option("--solve-for", "solve_for", type=click.IntRange(1, 5), required=True,
              help="Regressor index to solve for (1-5).")
@x_options
@click.pass_context
@handle_errors
def tune(ctx, coeffs_path, target, solve_for, x1, x2, x3, x4, x5):
    """Solve one parameter so the model output hits a target value."""
    coeffs = load_coefficients(coeffs_path)
    result = solve_parameter(
        TuneRequest(
            coeffs=coeffs,
            target_y=target,
            solve_for=solve_for,
            fixed=collect_x(x1, x2, x3, x4, x5),
        )
    )
    payload = wire.tune_payload(result)
    if not result.feasible:
        note(ctx, f"note: solved value {result.value!r} violates the x{solve_for} domain")
    header = ["value", "feasible", "band"]
    rows = [[payload["value"], payload["feasible"], payload["band"]]]
    if payload["integer_candidates"]:
        header += ["candidate", "candidate_y_raw", "candidate_band"]
        padded = []
        for i, cand in enumerate(payload["integer_candidates"]):
            base = rows[0] if i == 0 else [None, None, None]
            padded.append(base + [cand["value"], cand["y_raw"], cand["band"]])
        rows = padded
    emit(ctx, payload, header, rows)


@main.command(name="scan")
@click.option("--coeffs", "coeffs_path", type=click.Path(), required=True,
              help="Coefficient set JSON written by fit.")
@click.option("--vary", type=click.IntRange(1, 5), required=True,
              help="Regressor index to sweep (1-5).")
@click.option("--min", "vmin", type=float, required=True, help="Grid start (inclusive).")
@click.option("--max", "vmax", type=float, required=True, help="Grid end (inclusive).")
@click.option("--step", type=float, required=True, help="Grid spacing, > 0.")
@x_options
@click.pass_context
@handle_errors
def scan_cmd(ctx, coeffs_path, vary, vmin, vmax, step, x1, x2, x3, x4, x5):
    """Sweep one parameter over a range and tabulate predictions."""
    coeffs = load_coefficients(coeffs_path)
    points = scan(
        ScanRequest(
            coeffs=coeffs,
            vary=vary,
            vmin=vmin,
            vmax=vmax,
            step=step,
            fixed=collect_x(x1, x2, x3, x4, x5),
        )
    )
    payload = wire.scan_payload(points)
    header = ["value", "y_raw", "band"]
    rows = [[p["value"], p["y_raw"], p["band"]] for p in payload["points"]]
    emit(ctx, payload, header, rows)


# --- serve ---------------------------------------------------------------------


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--cors-origin", "cors_origins", multiple=True,
              help="Allowed CORS origin (repeatable).")
@click.option("--coeffs", "coeffs_paths", multiple=True, type=click.Path(),
              help="Coefficient file to preload (repeatable).")
@click.pass_context
@handle_errors
def serve(ctx, host, port, cors_origins, coeffs_paths):
    """Run the JSON what-if service over HTTP."""
    import uvicorn

    from .service import create_app

    initial = tuple(load_coefficients(p) for p in coeffs_paths)
    app = create_app(initial_sets=initial, cors_origins=cors_origins)
    for coeffs in initial:
        note(ctx, f"loaded {coeffs.model.value} set {wire.coefficient_id(coeffs)}")
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
