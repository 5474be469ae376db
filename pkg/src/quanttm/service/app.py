"""HTTP service exposing the pipeline to the web UI and to scripts.

The service is stateless between requests: every request loads the project
file, and mutations are optimistic. Writers must send the revision token
they based their edit on (``If-Match``); a stale token gets 409. Mutations
are serialized per project path and written via temp file + atomic rename,
so the persisted project is always loadable.
"""

from __future__ import annotations

import hashlib
import threading
from pathlib import Path

from fastapi import FastAPI, Header, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..bia import suggest_factors
from ..catalog import catalog_as_dict, factor_as_dict, keyword_table_as_dict
from ..errors import (
    DanglingReference,
    MalformedDocument,
    QuantTmError,
    UnknownSchemaVersion,
    ValidationFailure,
)
from ..pipeline import (
    classify_for_project,
    emergency_ranking,
    estimate_warnings,
    evaluate_adhoc_control,
    parse_principle_list,
    quantify_project,
    quantify_report,
    rosi_as_dict,
    write_project,
)
from ..project import (
    ProjectFile,
    export_report,
    emit_plot_series,
    load_project,
    parse_bia_record,
    plot_series_as_dict,
    project_from_dict,
    project_to_dict,
    validate_project,
)
from ..quantify import rank_by_impact
from .schemas import (
    CatalogResponse,
    ClassifyRequest,
    ClassifyResponse,
    EmergencyRankEntry,
    ErrorBody,
    FactorListResponse,
    ImpactRankEntry,
    PlotSeriesOut,
    ProjectEnvelope,
    QuantifiedOut,
    RevisionResponse,
    RosiRequest,
    RosiResponse,
)

_STATUS_BY_CODE = {
    MalformedDocument.code: 400,
    UnknownSchemaVersion.code: 400,
    DanglingReference.code: 404,
}


def _status_for(exc: QuantTmError) -> int:
    return _STATUS_BY_CODE.get(exc.code, 422)


def _error_response(status: int, code: str, message: str, path: str | None = None) -> JSONResponse:
    body = ErrorBody(status=status, code=code, message=message, path=path)
    return JSONResponse(status_code=status, content=body.model_dump())


class _ProjectStore:
    """Loads and writes one project file with optimistic concurrency."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.lock = threading.Lock()

    def read_raw(self) -> bytes:
        return self.path.read_bytes()

    def revision_of(self, raw: bytes) -> str:
        return hashlib.sha256(raw).hexdigest()

    def load(self) -> tuple[ProjectFile, str]:
        raw = self.read_raw()
        return load_project(raw), self.revision_of(raw)

    def mutate(self, expected_revision: str | None, fn):
        """Apply ``fn(project) -> project`` under the writer lock.

        The caller's revision must match the file's current revision.
        """
        if expected_revision is None:
            raise _RevisionRequired()
        with self.lock:
            raw = self.read_raw()
            current = self.revision_of(raw)
            if expected_revision.strip('"') != current:
                raise _StaleRevision(current)
            project = load_project(raw)
            updated = fn(project)
            violations = validate_project(updated)
            if violations:
                first = violations[0]
                raise ValidationFailure(first.message, path=first.path, violations=violations)
            write_project(updated, self.path)
            return updated, self.revision_of(self.read_raw())


class _RevisionRequired(Exception):
    pass


class _StaleRevision(Exception):
    def __init__(self, current: str):
        self.current = current


def create_app(project_path: str | Path, allow_origin: str | None = None) -> FastAPI:
    store = _ProjectStore(Path(project_path))
    app = FastAPI(title="quanttm", version="0.1.0")
    app.state.store = store

    if allow_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[allow_origin],
            allow_methods=["*"],
            allow_headers=["*"],
            expose_headers=["ETag"],
        )

    @app.exception_handler(QuantTmError)
    async def _domain_error(request: Request, exc: QuantTmError):
        return _error_response(_status_for(exc), exc.code, exc.message, exc.path)

    @app.exception_handler(_RevisionRequired)
    async def _revision_required(request: Request, exc: _RevisionRequired):
        return _error_response(400, "missing_revision",
                               "mutations require the If-Match header with the "
                               "current project revision")

    @app.exception_handler(_StaleRevision)
    async def _stale_revision(request: Request, exc: _StaleRevision):
        return _error_response(409, "stale_revision",
                               "the project changed since this revision was read; "
                               f"current revision is {exc.current}")

    @app.exception_handler(RequestValidationError)
    async def _request_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(p) for p in first.get("loc", ()) if p != "body")
        return _error_response(422, "validation_failure",
                               first.get("msg", "invalid request"), loc or None)

    # -- project document ---------------------------------------------------

    @app.get("/project", response_model=ProjectEnvelope)
    def get_project(response: Response):
        project, revision = store.load()
        response.headers["ETag"] = f'"{revision}"'
        return ProjectEnvelope(revision=revision, project=project_to_dict(project))

    @app.put("/project", response_model=RevisionResponse)
    def put_project(document: dict, if_match: str | None = Header(None, alias="If-Match")):
        def apply(_current: ProjectFile) -> ProjectFile:
            return project_from_dict(document)

        _, revision = store.mutate(if_match, apply)
        return RevisionResponse(revision=revision)

    # -- classification and factors ------------------------------------------

    @app.post("/classify", response_model=ClassifyResponse)
    def classify(payload: ClassifyRequest):
        project, _ = store.load()
        principles, _updated = classify_for_project(project, payload.name)
        return ClassifyResponse(name=payload.name,
                                principles=[p.value for p in principles])

    @app.get("/factors", response_model=FactorListResponse)
    def factors(principles: str = Query(..., description="e.g. A,C or Availability")):
        project, _ = store.load()
        wanted = parse_principle_list(principles)
        suggestions = suggest_factors(wanted, project.catalog())
        return FactorListResponse(factors=[factor_as_dict(f) for f in suggestions])

    @app.get("/catalog", response_model=CatalogResponse)
    def catalog():
        project, _ = store.load()
        return CatalogResponse(
            catalog=catalog_as_dict(project.catalog()),
            keyword_table=keyword_table_as_dict(),
        )

    # -- estimates ------------------------------------------------------------

    @app.put("/scenarios/{scenario_id}/estimates", response_model=RevisionResponse)
    def put_estimates(scenario_id: str, payload: dict,
                      if_match: str | None = Header(None, alias="If-Match")):
        warnings: list[str] = []

        def apply(project: ProjectFile) -> ProjectFile:
            if project.scenario_for(scenario_id) is None:
                raise DanglingReference(f"unknown scenario {scenario_id!r}",
                                        path=f"scenarios.{scenario_id}")
            record = parse_bia_record(payload, "estimates",
                                      default_currency=project.meta.currency,
                                      scenario_id=scenario_id)
            warnings.extend(estimate_warnings(record))
            return project.with_record(record)

        _, revision = store.mutate(if_match, apply)
        return RevisionResponse(revision=revision, warnings=warnings)

    # -- quantification -------------------------------------------------------

    # exclude_none keeps items without a recorded reference identical to the
    # CLI's --json output (the differential invariant)
    @app.get("/quantify", response_model=list[QuantifiedOut],
             response_model_exclude_none=True)
    def quantify():
        project, _ = store.load()
        items, _divergences = quantify_report(project)
        return items

    @app.get("/rank")
    def rank(by: str = Query("impact", pattern="^(impact|emergency)$")):
        project, _ = store.load()
        if by == "impact":
            ordered = rank_by_impact(quantify_project(project))
            return [
                ImpactRankEntry(
                    rank=i + 1, threat_id=q.threat_id, threat=q.threat_name,
                    q={"amount_minor": q.q_value.amount_minor,
                       "currency": q.q_value.currency},
                )
                for i, q in enumerate(ordered)
            ]
        return [
            EmergencyRankEntry(rank=i + 1, **entry)
            for i, entry in enumerate(emergency_ranking(project))
        ]

    @app.post("/rosi", response_model=RosiResponse)
    def rosi(payload: RosiRequest):
        project, _ = store.load()
        quantified = quantify_project(project)
        result = evaluate_adhoc_control(
            project, quantified, payload.annual_cost, payload.mitigation_rate,
            payload.threat_ids, payload.name)
        return RosiResponse(control=payload.name, **rosi_as_dict(result))

    # -- exports ---------------------------------------------------------------

    @app.get("/plots", response_model=list[PlotSeriesOut])
    def plots():
        project, _ = store.load()
        quantified = quantify_project(project)
        return [plot_series_as_dict(s) for s in emit_plot_series(project, quantified)]

    @app.get("/report.csv")
    def report_csv():
        project, _ = store.load()
        quantified = quantify_project(project)
        data = export_report(project, quantified)
        return Response(content=data, media_type="text/csv; charset=utf-8")

    return app
