"""Versioned project-file persistence, CSV report export, and plot series.

The on-disk format is UTF-8 JSON with an explicit ``schema_version``.
Serialization is canonical: keys sorted, integral numbers emitted as
integers, money as ``{"amount_minor": int, "currency": code}``, infinite
durations as the string "inf". Saving a loaded document reproduces it byte
for byte once it is in canonical form.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources

from .baselines import (
    DEFAULT_DREAD_THRESHOLDS,
    DreadThresholds,
    MatrixPolicy,
    OrdinalLevel,
    ScoreRange,
    check_policy,
)
from .bia import BiaRecord, OneTimeImpact, PersistentImpact, RecoveryStage, compute_scenario_loss
from .catalog import (
    FactorCatalog,
    ImpactFactor,
    builtin_catalog,
    factor_as_dict,
)
from .errors import (
    MalformedDocument,
    QuantTmError,
    UnknownSchemaVersion,
    ValidationFailure,
)
from .model import (
    Asset,
    Duration,
    SecurityPrinciple,
    ThreatAssetLink,
    ThreatEffect,
    ThreatEvent,
    ThreatModel,
    ThreatScenario,
    Violation,
    sort_principles,
    validate_model,
)
from .money import Money, validate_currency
from .quantify import QuantifiedThreat, SecurityControl, rank_by_impact

SCHEMA_VERSION = 1

FIXTURE_NAME = "swiss-sme.json"


# ---------------------------------------------------------------------------
# Document model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectMeta:
    name: str = ""
    currency: str = "USD"
    conversion_rates: tuple[tuple[str, float], ...] = ()
    created: str | None = None
    modified: str | None = None
    reference_q: tuple[tuple[str, Money], ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        validate_currency(self.currency)
        object.__setattr__(self, "conversion_rates", tuple(self.conversion_rates))
        object.__setattr__(self, "reference_q", tuple(self.reference_q))
        object.__setattr__(self, "notes", tuple(self.notes))


@dataclass(frozen=True)
class BaselineData:
    matrix_policy: tuple[tuple[str, str, str], ...] | None = None
    dread_thresholds: DreadThresholds | None = None
    matrix: tuple[tuple[str, OrdinalLevel, OrdinalLevel], ...] = ()
    dread: tuple[tuple[str, tuple[ScoreRange, ...]], ...] = ()

    def policy(self) -> MatrixPolicy | None:
        if self.matrix_policy is None:
            return None
        return {
            (OrdinalLevel(l), OrdinalLevel(s)): OrdinalLevel(p)
            for l, s, p in self.matrix_policy
        }

    def thresholds(self) -> DreadThresholds:
        return self.dread_thresholds or DEFAULT_DREAD_THRESHOLDS


@dataclass(frozen=True)
class ProjectFile:
    """A complete analysis project: model, scenarios, estimates, controls."""

    schema_version: int = SCHEMA_VERSION
    meta: ProjectMeta = field(default_factory=ProjectMeta)
    model: ThreatModel = field(default_factory=ThreatModel)
    scenarios: tuple[ThreatScenario, ...] = ()
    classifications: tuple[tuple[str, frozenset], ...] = ()
    catalog_extensions: tuple[ImpactFactor, ...] = ()
    bia_records: tuple[BiaRecord, ...] = ()
    controls: tuple[SecurityControl, ...] = ()
    baselines: BaselineData = field(default_factory=BaselineData)

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(self, "classifications", tuple(self.classifications))
        object.__setattr__(self, "catalog_extensions", tuple(self.catalog_extensions))
        object.__setattr__(self, "bia_records", tuple(self.bia_records))
        object.__setattr__(self, "controls", tuple(self.controls))

    def catalog(self) -> FactorCatalog:
        return builtin_catalog().with_extensions(self.catalog_extensions)

    def scenario_for(self, threat_id: str) -> ThreatScenario | None:
        for s in self.scenarios:
            if s.threat_id == threat_id:
                return s
        return None

    def record_for(self, scenario_id: str) -> BiaRecord | None:
        for r in self.bia_records:
            if r.scenario_id == scenario_id:
                return r
        return None

    def classification_for(self, threat_id: str) -> frozenset | None:
        for tid, principles in self.classifications:
            if tid == threat_id:
                return principles
        return None

    def reference_q_for(self, threat_id: str) -> Money | None:
        for tid, money in self.meta.reference_q:
            if tid == threat_id:
                return money
        return None

    def with_record(self, record: BiaRecord) -> "ProjectFile":
        """Replace or append the estimate record for one scenario."""
        records = tuple(r for r in self.bia_records if r.scenario_id != record.scenario_id)
        return replace(self, bia_records=records + (record,))

    def with_classification(self, threat_id: str, principles) -> "ProjectFile":
        rest = tuple((t, p) for t, p in self.classifications if t != threat_id)
        entry = (threat_id, frozenset(SecurityPrinciple(p) for p in principles))
        return replace(self, classifications=rest + (entry,))


def empty_project(currency: str = "USD", name: str = "", created: str | None = None) -> ProjectFile:
    return ProjectFile(meta=ProjectMeta(name=name, currency=currency, created=created))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_project(project: ProjectFile) -> list[Violation]:
    """Cross-reference checks over a structurally sound project."""
    violations = [Violation(f"threat_model.{v.path}", v.rule, v.message)
                  for v in validate_model(project.model)]

    threat_ids = {t.id for t in project.model.threats}
    catalog_ok = True
    try:
        catalog = project.catalog()
    except QuantTmError as exc:
        catalog_ok = False
        violations.append(Violation("catalog_extensions", exc.code, exc.message))

    seen_scenarios: set[str] = set()
    effect_ids_by_scenario: dict[str, set[str]] = {}
    for i, scenario in enumerate(project.scenarios):
        if scenario.threat_id not in threat_ids:
            violations.append(Violation(
                f"scenarios[{i}].threat_id", "dangling_reference",
                f"scenario references unknown threat {scenario.threat_id!r}"))
        if scenario.threat_id in seen_scenarios:
            violations.append(Violation(
                f"scenarios[{i}]", "duplicate_id",
                f"more than one scenario for threat {scenario.threat_id!r}"))
        seen_scenarios.add(scenario.threat_id)
        seen_effects: set[str] = set()
        for j, effect in enumerate(scenario.effects):
            if effect.id in seen_effects:
                violations.append(Violation(
                    f"scenarios[{i}].effects[{j}]", "duplicate_id",
                    f"duplicate effect id {effect.id!r}"))
            seen_effects.add(effect.id)
        effect_ids_by_scenario[scenario.threat_id] = seen_effects

    seen_records: set[str] = set()
    for i, record in enumerate(project.bia_records):
        path = f"bia_records[{i}]"
        if record.scenario_id in seen_records:
            violations.append(Violation(
                path, "duplicate_id",
                f"more than one estimate record for scenario {record.scenario_id!r}"))
        seen_records.add(record.scenario_id)
        effects = effect_ids_by_scenario.get(record.scenario_id)
        if effects is None:
            violations.append(Violation(
                f"{path}.scenario_id", "dangling_reference",
                f"record references unknown scenario {record.scenario_id!r}"))
            effects = set()
        for eid in record.estimated_effects:
            if eid not in effects:
                violations.append(Violation(
                    f"{path}.estimated_effects", "dangling_reference",
                    f"estimated effect {eid!r} not in scenario {record.scenario_id!r}"))
        if catalog_ok:
            for kind, impacts in (("one_time", record.one_time), ("persistent", record.persistent)):
                for j, imp in enumerate(impacts):
                    if not catalog.has(imp.factor_id):
                        violations.append(Violation(
                            f"{path}.{kind}[{j}].factor_id", "unknown_factor",
                            f"unknown impact factor {imp.factor_id!r}"))

    seen_controls: set[str] = set()
    for i, control in enumerate(project.controls):
        if control.id in seen_controls:
            violations.append(Violation(
                f"controls[{i}]", "duplicate_id", f"duplicate control id {control.id!r}"))
        seen_controls.add(control.id)
        for tid in control.mitigated_threat_ids:
            if tid not in threat_ids:
                violations.append(Violation(
                    f"controls[{i}].mitigated_threat_ids", "dangling_reference",
                    f"control references unknown threat {tid!r}"))

    for i, (tid, _) in enumerate(project.classifications):
        if tid not in threat_ids:
            violations.append(Violation(
                f"classifications[{i}]", "dangling_reference",
                f"classification references unknown threat {tid!r}"))

    for i, (tid, _, _) in enumerate(project.baselines.matrix):
        if tid not in threat_ids:
            violations.append(Violation(
                f"baselines.matrix[{i}]", "dangling_reference",
                f"matrix rating references unknown threat {tid!r}"))
    for i, (tid, _) in enumerate(project.baselines.dread):
        if tid not in threat_ids:
            violations.append(Violation(
                f"baselines.dread[{i}]", "dangling_reference",
                f"dread assessment references unknown threat {tid!r}"))
    for tid, money in project.meta.reference_q:
        if tid not in threat_ids:
            violations.append(Violation(
                "metadata.reference_q", "dangling_reference",
                f"reference figure for unknown threat {tid!r}"))
    return violations


# ---------------------------------------------------------------------------
# Canonical JSON encoding
# ---------------------------------------------------------------------------

def _canon_num(value):
    """Integral floats become ints so 48.0 and 48 serialize identically."""
    if isinstance(value, bool):
        raise ValueError("boolean is not a number here")
    if isinstance(value, int):
        return value
    f = float(value)
    if math.isinf(f) or math.isnan(f):
        raise ValueError(f"non-finite number {value!r} must use the 'inf' sentinel")
    if f == int(f) and abs(f) < 2**53:
        return int(f)
    return f


def _money_dict(m: Money) -> dict:
    return {"amount_minor": m.amount_minor, "currency": m.currency}


def _duration_value(d: Duration):
    return "inf" if d.is_infinite else _canon_num(d.hours)


def _principles_list(principles) -> list[str]:
    return [p.value for p in sort_principles(principles)]


def project_to_dict(project: ProjectFile) -> dict:
    m = project.meta
    return {
        "schema_version": project.schema_version,
        "metadata": {
            "name": m.name,
            "currency": m.currency,
            "conversion_rates": {code: _canon_num(rate) for code, rate in m.conversion_rates},
            "created": m.created,
            "modified": m.modified,
            "reference_q": {tid: _money_dict(q) for tid, q in m.reference_q},
            "notes": list(m.notes),
        },
        "threat_model": {
            "threats": [
                {"id": t.id, "name": t.name, "description": t.description}
                for t in project.model.threats
            ],
            "assets": [
                {"id": a.id, "name": a.name, "kind": a.kind.value, "description": a.description}
                for a in project.model.assets
            ],
            "links": [
                {
                    "threat_id": l.threat_id,
                    "asset_id": l.asset_id,
                    "p_initiation": _canon_num(l.p_initiation),
                    "p_success": _canon_num(l.p_success),
                    "duration_hours": _duration_value(l.duration),
                }
                for l in project.model.links
            ],
        },
        "scenarios": [
            {
                "threat_id": s.threat_id,
                "effects": [
                    {
                        "id": e.id,
                        "description": e.description,
                        "degree": _canon_num(e.degree),
                        "duration_override_hours": (
                            None if e.duration_override is None
                            else _duration_value(e.duration_override)
                        ),
                        "principles": _principles_list(e.principles),
                    }
                    for e in s.effects
                ],
            }
            for s in project.scenarios
        ],
        "classifications": {
            tid: _principles_list(principles) for tid, principles in project.classifications
        },
        "catalog_extensions": [factor_as_dict(f) for f in project.catalog_extensions],
        "bia_records": [
            {
                "scenario_id": r.scenario_id,
                "estimated_effects": list(r.estimated_effects),
                "one_time": [
                    {
                        "effect_id": i.effect_id,
                        "factor_id": i.factor_id,
                        "amount": _money_dict(i.amount),
                    }
                    for i in r.one_time
                ],
                "persistent": [
                    {
                        "effect_id": i.effect_id,
                        "factor_id": i.factor_id,
                        "daily_loss": _money_dict(i.daily_loss),
                        "stages": [
                            {
                                "recovery_level": _canon_num(s.recovery_level),
                                "days": _canon_num(s.days),
                            }
                            for s in i.stages
                        ],
                    }
                    for i in r.persistent
                ],
                "mtpd_hours": None if r.mtpd_hours is None else _canon_num(r.mtpd_hours),
                "currency": r.currency,
            }
            for r in project.bia_records
        ],
        "controls": [
            {
                "id": c.id,
                "name": c.name,
                "annual_cost": _money_dict(c.annual_cost),
                "mitigation_rate": _canon_num(c.mitigation_rate),
                "mitigated_threat_ids": list(c.mitigated_threat_ids),
            }
            for c in project.controls
        ],
        "baselines": {
            "matrix_policy": (
                None if project.baselines.matrix_policy is None
                else {
                    l: {s: p for ll, s, p in project.baselines.matrix_policy if ll == l}
                    for l in {ll for ll, _, _ in project.baselines.matrix_policy}
                }
            ),
            "dread_thresholds": (
                None if project.baselines.dread_thresholds is None
                else {
                    "low_max": _canon_num(project.baselines.dread_thresholds.low_max),
                    "medium_max": _canon_num(project.baselines.dread_thresholds.medium_max),
                    "high_max": _canon_num(project.baselines.dread_thresholds.high_max),
                }
            ),
            "matrix": [
                {"threat_id": tid, "likelihood": l.value, "severity": s.value}
                for tid, l, s in project.baselines.matrix
            ],
            "dread": [
                {
                    "threat_id": tid,
                    "damage": [_canon_num(r[0].lo), _canon_num(r[0].hi)],
                    "reproducibility": [_canon_num(r[1].lo), _canon_num(r[1].hi)],
                    "exploitability": [_canon_num(r[2].lo), _canon_num(r[2].hi)],
                    "affected_users": [_canon_num(r[3].lo), _canon_num(r[3].hi)],
                    "discoverability": [_canon_num(r[4].lo), _canon_num(r[4].hi)],
                }
                for tid, r in project.baselines.dread
            ],
        },
    }


def save_project(project: ProjectFile) -> bytes:
    """Serialize canonically: sorted keys, two-space indent, trailing newline."""
    doc = project_to_dict(project)
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _fail(path: str, message: str) -> ValidationFailure:
    return ValidationFailure(message, path=path,
                             violations=[Violation(path, "validation_failure", message)])


def _expect_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise _fail(path, f"expected an array, got {type(value).__name__}")
    return value


def _expect_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise _fail(path, f"expected a string, got {type(value).__name__}")
    return value


def _expect_num(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _fail(path, f"expected a number, got {type(value).__name__}")
    return value


def _get(obj: dict, key: str, path: str, default=..., required: bool = False):
    if key in obj:
        return obj[key]
    if required:
        raise _fail(f"{path}.{key}", "missing required field")
    return None if default is ... else default


def _parse_duration(value, path: str) -> Duration:
    if value == "inf":
        return Duration.infinite()
    return _wrap(path, lambda: Duration(_expect_num(value, path)))


def _parse_money(value, path: str) -> Money:
    obj = _expect_dict(value, path)
    minor = obj.get("amount_minor")
    if isinstance(minor, bool) or not isinstance(minor, int):
        raise _fail(f"{path}.amount_minor", "expected an integer amount in minor units")
    return _wrap(path, lambda: Money(minor, _expect_str(obj.get("currency"), f"{path}.currency")))


def _parse_principles(value, path: str) -> frozenset:
    values = []
    for i, raw in enumerate(_expect_list(value, path)):
        name = _expect_str(raw, f"{path}[{i}]")
        try:
            values.append(SecurityPrinciple(name))
        except ValueError:
            match = [p for p in SecurityPrinciple if p.value.lower() == name.lower()]
            if not match:
                raise _fail(f"{path}[{i}]", f"unknown security principle {name!r}")
            values.append(match[0])
    return frozenset(values)


def _wrap(path: str, thunk):
    """Convert a domain construction error into a ValidationFailure at path."""
    try:
        return thunk()
    except ValidationFailure:
        raise
    except QuantTmError as exc:
        raise ValidationFailure(exc.message, path=path,
                                violations=[Violation(path, exc.code, exc.message)])


def _parse_score(value, path: str) -> ScoreRange:
    if isinstance(value, list):
        if len(value) != 2:
            raise _fail(path, "score range needs exactly two bounds")
        lo = _expect_num(value[0], f"{path}[0]")
        hi = _expect_num(value[1], f"{path}[1]")
        return _wrap(path, lambda: ScoreRange(lo, hi))
    num = _expect_num(value, path)
    return _wrap(path, lambda: ScoreRange(num, num))


def parse_bia_record(obj, path: str, default_currency: str = "USD",
                     scenario_id: str | None = None) -> BiaRecord:
    """Parse one estimate record; ``scenario_id`` overrides the payload's
    (used when the id comes from an endpoint path)."""
    obj = _expect_dict(obj, path)
    one_time = []
    for j, io_ in enumerate(_expect_list(obj.get("one_time", []), f"{path}.one_time")):
        ipath = f"{path}.one_time[{j}]"
        io_ = _expect_dict(io_, ipath)
        one_time.append(_wrap(ipath, lambda io_=io_, ipath=ipath: OneTimeImpact(
            effect_id=_expect_str(_get(io_, "effect_id", ipath, required=True), f"{ipath}.effect_id"),
            factor_id=_expect_str(_get(io_, "factor_id", ipath, required=True), f"{ipath}.factor_id"),
            amount=_parse_money(_get(io_, "amount", ipath, required=True), f"{ipath}.amount"),
        )))
    persistent = []
    for j, po in enumerate(_expect_list(obj.get("persistent", []), f"{path}.persistent")):
        ppath = f"{path}.persistent[{j}]"
        po = _expect_dict(po, ppath)
        stages = tuple(
            _wrap(f"{ppath}.stages[{k}]", lambda so=so, k=k, ppath=ppath: RecoveryStage(
                recovery_level=_expect_num(_get(so, "recovery_level", f"{ppath}.stages[{k}]", required=True), f"{ppath}.stages[{k}].recovery_level"),
                days=_expect_num(_get(so, "days", f"{ppath}.stages[{k}]", required=True), f"{ppath}.stages[{k}].days"),
            ))
            for k, so in enumerate(_expect_list(_get(po, "stages", ppath, required=True), f"{ppath}.stages"))
        )
        persistent.append(_wrap(ppath, lambda po=po, ppath=ppath, stages=stages: PersistentImpact(
            effect_id=_expect_str(_get(po, "effect_id", ppath, required=True), f"{ppath}.effect_id"),
            factor_id=_expect_str(_get(po, "factor_id", ppath, required=True), f"{ppath}.factor_id"),
            daily_loss=_parse_money(_get(po, "daily_loss", ppath, required=True), f"{ppath}.daily_loss"),
            stages=stages,
        )))
    mtpd = obj.get("mtpd_hours")
    if scenario_id is None:
        scenario_id = _expect_str(_get(obj, "scenario_id", path, required=True),
                                  f"{path}.scenario_id")
    return _wrap(path, lambda: BiaRecord(
        scenario_id=scenario_id,
        estimated_effects=tuple(
            _expect_str(e, f"{path}.estimated_effects[{k}]")
            for k, e in enumerate(_expect_list(obj.get("estimated_effects", []), f"{path}.estimated_effects"))),
        one_time=tuple(one_time),
        persistent=tuple(persistent),
        mtpd_hours=None if mtpd is None else _expect_num(mtpd, f"{path}.mtpd_hours"),
        currency=_expect_str(obj.get("currency", default_currency), f"{path}.currency"),
    ))


def parse_dread_entry(obj: dict, path: str) -> tuple[str, tuple[ScoreRange, ...]]:
    obj = _expect_dict(obj, path)
    tid = _expect_str(_get(obj, "threat_id", path, required=True), f"{path}.threat_id")
    ranges = tuple(
        _parse_score(_get(obj, name, path, required=True), f"{path}.{name}")
        for name in ("damage", "reproducibility", "exploitability",
                     "affected_users", "discoverability")
    )
    return tid, ranges


def project_from_dict(doc: dict) -> ProjectFile:
    doc = _expect_dict(doc, "$")
    version = doc.get("schema_version")
    if version is None:
        raise MalformedDocument("document has no schema_version", path="$.schema_version")
    if version != SCHEMA_VERSION:
        raise UnknownSchemaVersion(f"unsupported schema_version {version!r}")

    meta_obj = _expect_dict(doc.get("metadata", {}), "metadata")
    meta = _wrap("metadata", lambda: ProjectMeta(
        name=_expect_str(meta_obj.get("name", ""), "metadata.name"),
        currency=_expect_str(meta_obj.get("currency", "USD"), "metadata.currency"),
        conversion_rates=tuple(
            (code, _expect_num(rate, f"metadata.conversion_rates.{code}"))
            for code, rate in sorted(_expect_dict(
                meta_obj.get("conversion_rates", {}), "metadata.conversion_rates").items())
        ),
        created=meta_obj.get("created"),
        modified=meta_obj.get("modified"),
        reference_q=tuple(
            (tid, _parse_money(val, f"metadata.reference_q.{tid}"))
            for tid, val in sorted(_expect_dict(
                meta_obj.get("reference_q", {}), "metadata.reference_q").items())
        ),
        notes=tuple(_expect_str(n, f"metadata.notes[{i}]")
                    for i, n in enumerate(_expect_list(meta_obj.get("notes", []), "metadata.notes"))),
    ))

    tm_obj = _expect_dict(doc.get("threat_model", {}), "threat_model")
    threats = tuple(
        _wrap(f"threat_model.threats[{i}]", lambda o=o, i=i: ThreatEvent(
            id=_expect_str(_get(o, "id", f"threat_model.threats[{i}]", required=True), f"threat_model.threats[{i}].id"),
            name=_expect_str(_get(o, "name", f"threat_model.threats[{i}]", required=True), f"threat_model.threats[{i}].name"),
            description=_expect_str(o.get("description", ""), f"threat_model.threats[{i}].description"),
        ))
        for i, o in enumerate(_expect_list(tm_obj.get("threats", []), "threat_model.threats"))
    )
    assets = tuple(
        _wrap(f"threat_model.assets[{i}]", lambda o=o, i=i: Asset(
            id=_expect_str(_get(o, "id", f"threat_model.assets[{i}]", required=True), f"threat_model.assets[{i}].id"),
            name=_expect_str(_get(o, "name", f"threat_model.assets[{i}]", required=True), f"threat_model.assets[{i}].name"),
            kind=_expect_str(_get(o, "kind", f"threat_model.assets[{i}]", required=True), f"threat_model.assets[{i}].kind"),
            description=_expect_str(o.get("description", ""), f"threat_model.assets[{i}].description"),
        ))
        for i, o in enumerate(_expect_list(tm_obj.get("assets", []), "threat_model.assets"))
    )
    links = tuple(
        _wrap(f"threat_model.links[{i}]", lambda o=o, i=i: ThreatAssetLink(
            threat_id=_expect_str(_get(o, "threat_id", f"threat_model.links[{i}]", required=True), f"threat_model.links[{i}].threat_id"),
            asset_id=_expect_str(_get(o, "asset_id", f"threat_model.links[{i}]", required=True), f"threat_model.links[{i}].asset_id"),
            p_initiation=_expect_num(_get(o, "p_initiation", f"threat_model.links[{i}]", required=True), f"threat_model.links[{i}].p_initiation"),
            p_success=_expect_num(_get(o, "p_success", f"threat_model.links[{i}]", required=True), f"threat_model.links[{i}].p_success"),
            duration=_parse_duration(_get(o, "duration_hours", f"threat_model.links[{i}]", required=True), f"threat_model.links[{i}].duration_hours"),
        ))
        for i, o in enumerate(_expect_list(tm_obj.get("links", []), "threat_model.links"))
    )
    model = ThreatModel(threats, assets, links)

    scenarios = []
    for i, obj in enumerate(_expect_list(doc.get("scenarios", []), "scenarios")):
        path = f"scenarios[{i}]"
        obj = _expect_dict(obj, path)
        effects = []
        for j, eo in enumerate(_expect_list(_get(obj, "effects", path, required=True), f"{path}.effects")):
            epath = f"{path}.effects[{j}]"
            eo = _expect_dict(eo, epath)
            override = eo.get("duration_override_hours")
            effects.append(_wrap(epath, lambda eo=eo, epath=epath, override=override: ThreatEffect(
                id=_expect_str(_get(eo, "id", epath, required=True), f"{epath}.id"),
                description=_expect_str(_get(eo, "description", epath, required=True), f"{epath}.description"),
                degree=_expect_num(eo.get("degree", 1.0), f"{epath}.degree"),
                duration_override=(None if override is None
                                   else _parse_duration(override, f"{epath}.duration_override_hours")),
                principles=_parse_principles(eo.get("principles", []), f"{epath}.principles"),
            )))
        scenarios.append(_wrap(path, lambda obj=obj, path=path, effects=effects: ThreatScenario(
            threat_id=_expect_str(_get(obj, "threat_id", path, required=True), f"{path}.threat_id"),
            effects=tuple(effects),
        )))

    classifications = tuple(
        (tid, _parse_principles(val, f"classifications.{tid}"))
        for tid, val in sorted(_expect_dict(doc.get("classifications", {}), "classifications").items())
    )

    extensions = tuple(
        _wrap(f"catalog_extensions[{i}]", lambda o=o, i=i: ImpactFactor(
            id=_expect_str(_get(o, "id", f"catalog_extensions[{i}]", required=True), f"catalog_extensions[{i}].id"),
            name=_expect_str(_get(o, "name", f"catalog_extensions[{i}]", required=True), f"catalog_extensions[{i}].name"),
            tangibility=_expect_str(_get(o, "tangibility", f"catalog_extensions[{i}]", required=True), f"catalog_extensions[{i}].tangibility"),
            applicable_principles=_parse_principles(
                _get(o, "applicable_principles", f"catalog_extensions[{i}]", required=True),
                f"catalog_extensions[{i}].applicable_principles"),
            loss_kind=_expect_str(_get(o, "loss_kind", f"catalog_extensions[{i}]", required=True), f"catalog_extensions[{i}].loss_kind"),
            builtin=False,
        ))
        for i, o in enumerate(_expect_list(doc.get("catalog_extensions", []), "catalog_extensions"))
    )

    records = [
        parse_bia_record(obj, f"bia_records[{i}]", default_currency=meta.currency)
        for i, obj in enumerate(_expect_list(doc.get("bia_records", []), "bia_records"))
    ]

    controls = tuple(
        _wrap(f"controls[{i}]", lambda o=o, i=i: SecurityControl(
            id=_expect_str(_get(o, "id", f"controls[{i}]", required=True), f"controls[{i}].id"),
            name=_expect_str(o.get("name", ""), f"controls[{i}].name"),
            annual_cost=_parse_money(_get(o, "annual_cost", f"controls[{i}]", required=True), f"controls[{i}].annual_cost"),
            mitigation_rate=_expect_num(_get(o, "mitigation_rate", f"controls[{i}]", required=True), f"controls[{i}].mitigation_rate"),
            mitigated_threat_ids=tuple(
                _expect_str(t, f"controls[{i}].mitigated_threat_ids[{k}]")
                for k, t in enumerate(_expect_list(
                    _get(o, "mitigated_threat_ids", f"controls[{i}]", required=True),
                    f"controls[{i}].mitigated_threat_ids"))),
        ))
        for i, o in enumerate(_expect_list(doc.get("controls", []), "controls"))
    )

    base_obj = _expect_dict(doc.get("baselines", {}), "baselines")
    policy_obj = base_obj.get("matrix_policy")
    matrix_policy = None
    if policy_obj is not None:
        policy_obj = _expect_dict(policy_obj, "baselines.matrix_policy")
        entries = []
        for l, row in sorted(policy_obj.items()):
            row = _expect_dict(row, f"baselines.matrix_policy.{l}")
            for s, p in sorted(row.items()):
                entries.append((l, s, _expect_str(p, f"baselines.matrix_policy.{l}.{s}")))
        matrix_policy = tuple(entries)
    thresholds_obj = base_obj.get("dread_thresholds")
    thresholds = None
    if thresholds_obj is not None:
        thresholds_obj = _expect_dict(thresholds_obj, "baselines.dread_thresholds")
        thresholds = _wrap("baselines.dread_thresholds", lambda: DreadThresholds(
            low_max=_expect_num(thresholds_obj.get("low_max", 12), "baselines.dread_thresholds.low_max"),
            medium_max=_expect_num(thresholds_obj.get("medium_max", 28), "baselines.dread_thresholds.medium_max"),
            high_max=_expect_num(thresholds_obj.get("high_max", 42), "baselines.dread_thresholds.high_max"),
        ))
    matrix = []
    for i, obj in enumerate(_expect_list(base_obj.get("matrix", []), "baselines.matrix")):
        path = f"baselines.matrix[{i}]"
        obj = _expect_dict(obj, path)
        matrix.append(_wrap(path, lambda obj=obj, path=path: (
            _expect_str(_get(obj, "threat_id", path, required=True), f"{path}.threat_id"),
            OrdinalLevel(_expect_str(_get(obj, "likelihood", path, required=True), f"{path}.likelihood")),
            OrdinalLevel(_expect_str(_get(obj, "severity", path, required=True), f"{path}.severity")),
        )))
    dread = [
        parse_dread_entry(obj, f"baselines.dread[{i}]")
        for i, obj in enumerate(_expect_list(base_obj.get("dread", []), "baselines.dread"))
    ]
    baselines = BaselineData(
        matrix_policy=matrix_policy,
        dread_thresholds=thresholds,
        matrix=tuple(matrix),
        dread=tuple(dread),
    )
    if baselines.matrix_policy is not None:
        _wrap("baselines.matrix_policy", lambda: check_policy(baselines.policy()))

    project = ProjectFile(
        schema_version=version,
        meta=meta,
        model=model,
        scenarios=tuple(scenarios),
        classifications=classifications,
        catalog_extensions=extensions,
        bia_records=tuple(records),
        controls=controls,
        baselines=baselines,
    )
    violations = validate_project(project)
    if violations:
        first = violations[0]
        raise ValidationFailure(
            f"{len(violations)} validation problem(s); first: {first.message}",
            path=first.path, violations=violations)
    return project


def load_project(data: bytes | str) -> ProjectFile:
    """Parse and fully validate a project document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedDocument(f"not valid UTF-8: {exc}")
    if not data.strip():
        raise MalformedDocument("document is empty")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level value must be an object")
    return project_from_dict(doc)


def fixture_path():
    """Filesystem path of the bundled case-study project."""
    return resources.files("quanttm").joinpath("fixtures").joinpath(FIXTURE_NAME)


def load_fixture() -> ProjectFile:
    return load_project(fixture_path().read_bytes())


# ---------------------------------------------------------------------------
# Report export
# ---------------------------------------------------------------------------

REPORT_COLUMNS = ("rank", "threat", "duration_hours", "q", "currency", "contributions")


def export_report(project: ProjectFile, quantified: list[QuantifiedThreat]) -> bytes:
    """CSV with one row per threat, ranked by yearly figure (RFC 4180)."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(REPORT_COLUMNS)
    for rank, q in enumerate(rank_by_impact(list(quantified)), start=1):
        contributions = ";".join(
            f"{eid}={money.major}" for eid, money in q.contributions)
        writer.writerow([
            rank,
            q.threat_name,
            "inf" if q.duration.is_infinite else f"{q.duration.hours:g}",
            str(q.q_value.major),
            q.q_value.currency,
            contributions,
        ])
    return buf.getvalue().encode("utf-8")


# ---------------------------------------------------------------------------
# Plot series
# ---------------------------------------------------------------------------

class PlotKind(str, Enum):
    IMPACT_BAR = "impact_bar"
    TANGIBLE_INTANGIBLE_PIE = "tangible_intangible_pie"
    FACTOR_PIE = "factor_pie"
    RECOVERY_TIMELINE = "recovery_timeline"


@dataclass(frozen=True)
class PlotSeries:
    """One renderable series; values are major currency units."""

    kind: PlotKind
    name: str
    labels: tuple[str, ...]
    values: tuple[float, ...]
    currency: str

    def __post_init__(self):
        if len(self.labels) != len(self.values):
            raise ValidationFailure(
                f"series {self.name!r} has {len(self.labels)} labels "
                f"but {len(self.values)} values")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


def _major_float(m: Money) -> float:
    return float(m.major)


def emit_plot_series(project: ProjectFile, quantified: list[QuantifiedThreat]) -> list[PlotSeries]:
    """Build every chartable series from the project and its quantification.

    One impact bar over all threats; per threat with estimated impacts, a
    tangible/intangible pie and a per-factor pie; per persistent impact, a
    step series of residual daily loss over the recovery stages.
    """
    catalog = project.catalog()
    currency = quantified[0].q_value.currency if quantified else project.meta.currency
    by_id = {q.threat_id: q for q in quantified}

    series: list[PlotSeries] = [PlotSeries(
        kind=PlotKind.IMPACT_BAR,
        name="Yearly loss by threat",
        labels=tuple(t.name for t in project.model.threats),
        values=tuple(
            _major_float(by_id[t.id].q_value) if t.id in by_id else 0.0
            for t in project.model.threats),
        currency=currency,
    )]

    for threat in project.model.threats:
        scenario = project.scenario_for(threat.id)
        record = project.record_for(threat.id) if scenario else None
        if record is None or (not record.one_time and not record.persistent):
            continue
        breakdown = compute_scenario_loss(record, catalog)
        series.append(PlotSeries(
            kind=PlotKind.TANGIBLE_INTANGIBLE_PIE,
            name=threat.name,
            labels=("Tangible", "Intangible"),
            values=(_major_float(breakdown.tangible_total),
                    _major_float(breakdown.intangible_total)),
            currency=record.currency,
        ))
        series.append(PlotSeries(
            kind=PlotKind.FACTOR_PIE,
            name=threat.name,
            labels=tuple(catalog.get(fid).name for fid, _ in breakdown.per_factor),
            values=tuple(_major_float(m) for _, m in breakdown.per_factor),
            currency=record.currency,
        ))
        for imp in record.persistent:
            labels = []
            values = []
            day = 0.0
            for stage in imp.stages:
                labels.append(f"day {day:g}-{day + stage.days:g}")
                values.append(_major_float(imp.daily_loss.scaled(1 - stage.recovery_level)))
                day += stage.days
            series.append(PlotSeries(
                kind=PlotKind.RECOVERY_TIMELINE,
                name=f"{threat.name}: {catalog.get(imp.factor_id).name}",
                labels=tuple(labels),
                values=tuple(values),
                currency=record.currency,
            ))
    return series


def plot_series_as_dict(series: PlotSeries) -> dict:
    return {
        "kind": series.kind.value,
        "name": series.name,
        "labels": list(series.labels),
        "values": [_canon_num(v) for v in series.values],
        "currency": series.currency,
    }
