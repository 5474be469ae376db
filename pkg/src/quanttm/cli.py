"""Command-line front end; a thin client over the core pipeline.

Every command loads the project file, calls the same core functions the HTTP
service uses, and prints either a human table or JSON (``--json``). Errors
go to stderr and exit with status 1.
"""

from __future__ import annotations

import functools
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .baselines import DREAD_COMPONENTS, MatrixRating, dread_score
from .bia import suggest_factors
from .catalog import catalog_as_dict, factor_as_dict, keyword_table_as_dict
from .errors import (
    DanglingReference,
    IoFailure,
    QuantTmError,
    ValidationFailure,
)
from .pipeline import (
    classify_for_project,
    emergency_ranking,
    estimate_warnings,
    evaluate_adhoc_control,
    parse_principle_list,
    quantify_project,
    quantify_report,
    read_project,
    rosi_as_dict,
    write_project,
)
from .project import (
    ProjectFile,
    empty_project,
    export_report,
    parse_dread_entry,
    validate_project,
)
from .quantify import evaluate_rosi, rank_by_impact

_PROJECT_OPTION = click.option(
    "--project", "project_path",
    envvar="QUANTTM_PROJECT",
    type=click.Path(path_type=Path),
    required=True,
    help="Project file path (or set QUANTTM_PROJECT).",
)


def _json_flag(fn):
    return click.option("--json", "as_json", is_flag=True, help="Emit JSON on stdout.")(fn)


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except QuantTmError as exc:
            click.echo(f"error: {exc}", err=True)
            if isinstance(exc, ValidationFailure):
                for v in exc.violations[1:]:
                    click.echo(f"error: {v.path}: {v.message}", err=True)
            sys.exit(1)
    return wrapper


def _emit_json(payload) -> None:
    click.echo(json.dumps(payload, indent=2, sort_keys=False))


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _touch(project: ProjectFile) -> ProjectFile:
    from dataclasses import replace
    return replace(project, meta=replace(project.meta, modified=_now()))


@click.group()
@click.version_option(package_name="quanttm")
def main():
    """Quantify threats in business terms: model, estimate, rank, decide."""


# ---------------------------------------------------------------------------
# init / validate
# ---------------------------------------------------------------------------

@main.command()
@click.argument("path", type=click.Path(path_type=Path))
@click.option("--currency", default="USD", show_default=True, help="Project currency code.")
@click.option("--name", default="", help="Project name.")
@click.option("--force", is_flag=True, help="Overwrite an existing file.")
@_handle_errors
def init(path: Path, currency: str, name: str, force: bool):
    """Create an empty versioned project file."""
    if path.exists() and not force:
        raise IoFailure(f"{path} already exists (use --force to overwrite)")
    project = empty_project(currency=currency, name=name, created=_now())
    write_project(project, path)
    click.echo(f"created {path} (currency {currency})")


@main.command()
@_PROJECT_OPTION
@_json_flag
@_handle_errors
def validate(project_path: Path, as_json: bool):
    """Load a project and report invariant violations."""
    try:
        project = read_project(project_path)
    except ValidationFailure as exc:
        if as_json:
            _emit_json({"violations": [
                {"path": v.path, "rule": v.rule, "message": v.message}
                for v in exc.violations]})
        else:
            for v in exc.violations:
                click.echo(f"{v.path}: {v.message}")
        sys.exit(1)
    violations = validate_project(project)  # load() already enforces: stays empty
    if as_json:
        _emit_json({"violations": []})
    else:
        click.echo(f"{project_path}: no violations")


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

@main.command()
@click.argument("name")
@_PROJECT_OPTION
@click.option("--principles", "principles_raw", default=None,
              help="Manual override, e.g. 'C,I' or 'Availability'.")
@_json_flag
@_handle_errors
def classify(name: str, project_path: Path, principles_raw: str | None, as_json: bool):
    """Heuristically map a threat name to CIAA principles and persist it."""
    project = read_project(project_path)
    override = parse_principle_list(principles_raw) if principles_raw is not None else None
    principles, updated = classify_for_project(project, name, override)
    stored = False
    if updated is not None and (principles or override is not None):
        write_project(_touch(updated), project_path)
        stored = True
    if as_json:
        _emit_json({
            "name": name,
            "principles": [p.value for p in principles],
            "stored": stored,
        })
    else:
        if principles:
            click.echo(f"{name}: {', '.join(p.value for p in principles)}")
        else:
            click.echo(f"{name}: no match")
            click.echo("no keyword match; classify manually with --principles C,I,A,ACC",
                       err=True)
        if stored:
            click.echo(f"stored classification in {project_path}", err=True)


# ---------------------------------------------------------------------------
# factors / catalog
# ---------------------------------------------------------------------------

@main.command()
@click.option("--principles", "principles_raw", required=True,
              help="Principles to suggest for, e.g. 'A' or 'C,I'.")
@_PROJECT_OPTION
@_json_flag
@_handle_errors
def factors(principles_raw: str, project_path: Path, as_json: bool):
    """Suggest impact factors for a set of security principles."""
    project = read_project(project_path)
    wanted = parse_principle_list(principles_raw)
    suggestions = suggest_factors(wanted, project.catalog())
    if as_json:
        _emit_json({"factors": [factor_as_dict(f) for f in suggestions]})
    else:
        for f in suggestions:
            klass = f.tangibility.value
            click.echo(f"{f.id:36s} {klass:10s} {f.loss_kind.value:10s} {f.name}")


@main.command()
@_handle_errors
def catalog():
    """Export the built-in factor catalog and keyword table as JSON."""
    _emit_json({
        "catalog": catalog_as_dict(),
        "keyword_table": keyword_table_as_dict(),
    })


# ---------------------------------------------------------------------------
# quantify
# ---------------------------------------------------------------------------

def _fmt_duration(value) -> str:
    return "inf" if value == "inf" else f"{value:g}h"


def _fmt_amount(money_doc: dict) -> str:
    from .money import currency_exponent

    exp = currency_exponent(money_doc["currency"])
    major = money_doc["amount_minor"] / (10 ** exp)
    return f"{major:,.{exp}f}"


@main.command()
@_PROJECT_OPTION
@click.option("--rank", "ranked", is_flag=True, help="Order by descending yearly loss.")
@_json_flag
@_handle_errors
def quantify(project_path: Path, ranked: bool, as_json: bool):
    """Compute each threat's yearly monetary figure."""
    project = read_project(project_path)
    items, divergences = quantify_report(project)
    if ranked:
        quantified = rank_by_impact(quantify_project(project))
        order = {q.threat_id: i for i, q in enumerate(quantified)}
        items = sorted(items, key=lambda d: order[d["threat_id"]])
    for d in divergences:
        click.echo(d.message(), err=True)
    if as_json:
        _emit_json(items)
        return
    currency = project.meta.currency
    click.echo(f"{'Threat':<20s} {'Duration':>9s} {'Yearly loss (' + currency + ')':>22s}")
    for item in items:
        click.echo(f"{item['threat']:<20s} {_fmt_duration(item['duration_hours']):>9s} "
                   f"{_fmt_amount(item['q']):>22s}")


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------

@main.command()
@_PROJECT_OPTION
@click.option("--by", type=click.Choice(["impact", "emergency"]), default="impact",
              show_default=True)
@_json_flag
@_handle_errors
def rank(project_path: Path, by: str, as_json: bool):
    """Rank threats by yearly loss or by emergency (ascending MTPD)."""
    project = read_project(project_path)
    if by == "impact":
        ordered = rank_by_impact(quantify_project(project))
        rows = [
            {"rank": i + 1, "threat_id": q.threat_id, "threat": q.threat_name,
             "q": {"amount_minor": q.q_value.amount_minor, "currency": q.q_value.currency}}
            for i, q in enumerate(ordered)
        ]
    else:
        rows = [{"rank": i + 1, **entry} for i, entry in enumerate(emergency_ranking(project))]
    if as_json:
        _emit_json(rows)
        return
    for row in rows:
        if by == "impact":
            click.echo(f"{row['rank']:>2d}. {row['threat']:<20s} "
                       f"{_fmt_amount(row['q']):>15s} {row['q']['currency']}")
        else:
            mtpd = row["mtpd_hours"]
            click.echo(f"{row['rank']:>2d}. {row['threat']:<20s} "
                       f"MTPD {'-' if mtpd is None else f'{mtpd:g}h'}")


# ---------------------------------------------------------------------------
# rosi
# ---------------------------------------------------------------------------

@main.command()
@_PROJECT_OPTION
@click.option("--control", "control_id", default=None,
              help="Evaluate a control stored in the project.")
@click.option("--cost", type=str, default=None, help="Yearly control cost in major units.")
@click.option("--rate", type=float, default=1.0, show_default=True,
              help="Mitigation rate in [0, 1].")
@click.option("--threat", "threats", multiple=True,
              help="Threat id or name the control mitigates (repeatable).")
@click.option("--name", default="ad-hoc control", help="Label for an ad-hoc control.")
@_json_flag
@_handle_errors
def rosi(project_path: Path, control_id: str | None, cost: str | None,
         rate: float, threats: tuple[str, ...], name: str, as_json: bool):
    """Evaluate the economic return of a security control."""
    project = read_project(project_path)
    quantified = quantify_project(project)
    if control_id is not None:
        control = next((c for c in project.controls if c.id == control_id), None)
        if control is None:
            raise DanglingReference(f"unknown control {control_id!r}")
        result = evaluate_rosi(control, quantified)
        label = control.name
    else:
        if cost is None or not threats:
            raise click.UsageError("either --control, or --cost with at least one --threat")
        result = evaluate_adhoc_control(project, quantified, cost, rate, list(threats), name)
        label = name
    if as_json:
        _emit_json({"control": label, **rosi_as_dict(result)})
        return
    click.echo(f"control:          {label}")
    click.echo(f"mitigated impact: {result.mitigated_impact.format()}")
    click.echo(f"control cost:     {result.control_cost.format()}")
    click.echo(f"absolute return:  {result.absolute_return.format()}")
    click.echo("cost-effective" if result.cost_effective else "not cost-effective")


# ---------------------------------------------------------------------------
# compare (baselines)
# ---------------------------------------------------------------------------

def _load_scores(path: Path) -> list:
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoFailure(f"cannot read scores file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationFailure(f"scores file is not valid JSON: {exc}", path=str(path))
    if not isinstance(data, list):
        raise ValidationFailure("scores file must be a JSON array", path=str(path))
    return data


@main.command()
@click.argument("method", type=click.Choice(["dread", "matrix"]))
@click.argument("scores_file", type=click.Path(path_type=Path, exists=True))
@_PROJECT_OPTION
@_json_flag
@_handle_errors
def compare(method: str, scores_file: Path, project_path: Path, as_json: bool):
    """Score threats with a qualitative baseline for contrast."""
    project = read_project(project_path)
    names = {t.id: t.name for t in project.model.threats}
    entries = _load_scores(scores_file)
    if method == "dread":
        thresholds = project.baselines.thresholds()
        rows = []
        for i, obj in enumerate(entries):
            tid, ranges = parse_dread_entry(obj, f"[{i}]")
            assessment = dread_score(tid, *ranges, thresholds=thresholds)
            rows.append(assessment)
        if as_json:
            _emit_json([
                {
                    "threat_id": a.threat_id,
                    "threat": names.get(a.threat_id, a.threat_id),
                    **{c: [getattr(a, c).lo, getattr(a, c).hi] for c in DREAD_COMPONENTS},
                    "sum": list(a.sum_range),
                    "grade": [g.value for g in a.grade_range],
                }
                for a in rows
            ])
            return
        click.echo(f"{'Threat':<20s} {'D':>6s} {'R':>6s} {'E':>6s} {'A':>6s} {'D':>6s} "
                   f"{'Sum':>10s} {'Grade':>6s}")
        for a in rows:
            comps = [str(getattr(a, c)) for c in DREAD_COMPONENTS]
            click.echo(f"{names.get(a.threat_id, a.threat_id):<20s} "
                       + " ".join(f"{c:>6s}" for c in comps)
                       + f" {a.sum_label():>10s} {a.grade_label():>6s}")
    else:
        policy = project.baselines.policy()
        ratings = []
        for i, obj in enumerate(entries):
            if not isinstance(obj, dict):
                raise ValidationFailure("matrix entry must be an object", path=f"[{i}]")
            tid = obj.get("threat_id") or obj.get("threat")
            ratings.append(MatrixRating.rate(
                tid, obj.get("likelihood"), obj.get("severity"), policy))
        if as_json:
            _emit_json([
                {"threat_id": r.threat_id, "threat": names.get(r.threat_id, r.threat_id),
                 "likelihood": r.likelihood.value, "severity": r.severity.value,
                 "priority": r.priority.value}
                for r in ratings
            ])
            return
        click.echo(f"{'Threat':<20s} {'Likelihood':>10s} {'Severity':>10s} {'Priority':>10s}")
        for r in ratings:
            click.echo(f"{names.get(r.threat_id, r.threat_id):<20s} "
                       f"{r.likelihood.value:>10s} {r.severity.value:>10s} {r.priority.value:>10s}")


# ---------------------------------------------------------------------------
# report / estimates / serve
# ---------------------------------------------------------------------------

@main.command()
@_PROJECT_OPTION
@click.option("--output", "-o", type=click.Path(path_type=Path), default=None,
              help="Write CSV here instead of stdout.")
@_handle_errors
def report(project_path: Path, output: Path | None):
    """Export the quantified threat table as CSV."""
    project = read_project(project_path)
    quantified = quantify_project(project)
    data = export_report(project, quantified)
    if output is None:
        sys.stdout.buffer.write(data)
    else:
        output.write_bytes(data)
        click.echo(f"wrote {output}", err=True)


@main.command()
@click.argument("scenario_id")
@click.argument("estimates_file", type=click.Path(path_type=Path, exists=True))
@_PROJECT_OPTION
@_handle_errors
def estimate(scenario_id: str, estimates_file: Path, project_path: Path):
    """Attach an impact estimate record (JSON file) to a scenario."""
    from .project import parse_bia_record

    project = read_project(project_path)
    if project.scenario_for(scenario_id) is None:
        raise DanglingReference(f"unknown scenario {scenario_id!r}")
    payload = json.loads(estimates_file.read_text(encoding="utf-8"))
    record = parse_bia_record(payload, "estimates", default_currency=project.meta.currency,
                              scenario_id=scenario_id)
    updated = project.with_record(record)
    failures = validate_project(updated)
    if failures:
        raise ValidationFailure(failures[0].message, path=failures[0].path, violations=failures)
    write_project(_touch(updated), project_path)
    for warning in estimate_warnings(record):
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"stored estimates for scenario {scenario_id}")


@main.command()
@_PROJECT_OPTION
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True, type=int)
@click.option("--allow-origin", default=None,
              help="Allow cross-origin requests from this UI origin.")
@_handle_errors
def serve(project_path: Path, host: str, port: int, allow_origin: str | None):
    """Run the HTTP API for the web UI and scripts."""
    import uvicorn

    from .service import create_app

    read_project(project_path)  # fail fast on a broken project
    app = create_app(project_path, allow_origin=allow_origin)
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
