"""Project-level orchestration shared by the CLI and the HTTP service.

Both front ends call these functions and serialize with the same helpers,
which is what guarantees they report identical numbers for the same project.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .bia import classify_ciaa, recovery_lint
from .errors import DanglingReference, InvalidValue, IoFailure, MissingEstimate
from .model import Duration, SecurityPrinciple, sort_principles
from .money import Money, currency_exponent
from .project import ProjectFile, load_project, save_project
from .quantify import (
    QuantifiedThreat,
    SecurityControl,
    evaluate_rosi,
    quantify_threat,
    rank_by_emergency,
)


# ---------------------------------------------------------------------------
# Quantification over a whole project
# ---------------------------------------------------------------------------

def quantify_project(project: ProjectFile) -> list[QuantifiedThreat]:
    """Quantify every threat in model order.

    A threat without a business scenario contributes zero (nothing to lose
    was identified). A threat with a scenario must have an asset link and an
    estimate record covering every effect, otherwise MissingEstimate names
    what is missing.
    """
    results = []
    currency = project.meta.currency
    for threat in project.model.threats:
        scenario = project.scenario_for(threat.id)
        links = project.model.links_for_threat(threat.id)
        if scenario is None:
            results.append(QuantifiedThreat(
                threat_id=threat.id,
                threat_name=threat.name,
                q_value=Money(0, currency),
                duration=links[0].duration if links else Duration.infinite(),
                contributions=(),
            ))
            continue
        if not links:
            raise MissingEstimate(
                f"threat {threat.name!r} has a scenario but no asset link "
                "with probabilities", path=f"threat_model.links")
        record = project.record_for(scenario.threat_id)
        if record is None:
            missing = ", ".join(e.id for e in scenario.effects)
            raise MissingEstimate(
                f"threat {threat.name!r} has no impact estimates "
                f"(uncovered effects: {missing})",
                path=f"bia_records")
        for effect in scenario.effects:
            if not record.covers(effect.id):
                raise MissingEstimate(
                    f"threat {threat.name!r}: effect {effect.id!r} "
                    f"({effect.description}) has no impact estimate",
                    path=f"bia_records")
        merged: dict[str, int] = {}
        total = 0
        for link in links:
            partial = quantify_threat(link, scenario, record, threat_name=threat.name)
            for effect_id, money in partial.contributions:
                merged[effect_id] = merged.get(effect_id, 0) + money.amount_minor
            total += partial.q_value.amount_minor
        results.append(QuantifiedThreat(
            threat_id=threat.id,
            threat_name=threat.name,
            q_value=Money(total, record.currency),
            duration=links[0].duration,
            contributions=tuple(
                (e.id, Money(merged.get(e.id, 0), record.currency))
                for e in scenario.effects),
        ))
    return results


@dataclass(frozen=True)
class ReferenceDivergence:
    """A computed figure that disagrees with the reference recorded in the
    project metadata (beyond one major unit)."""

    threat_id: str
    threat_name: str
    computed: Money
    reference: Money

    def message(self) -> str:
        return (f"note: {self.threat_name}: computed {self.computed.format()} "
                f"diverges from the recorded reference {self.reference.format()}; "
                "the recorded figure is not reproducible from the stored inputs")


def reference_divergences(project: ProjectFile,
                          quantified: list[QuantifiedThreat]) -> list[ReferenceDivergence]:
    out = []
    for q in quantified:
        ref = project.reference_q_for(q.threat_id)
        if ref is None or ref.currency != q.q_value.currency:
            continue
        tolerance = 10 ** currency_exponent(ref.currency)  # one major unit
        if abs(ref.amount_minor - q.q_value.amount_minor) > tolerance:
            out.append(ReferenceDivergence(q.threat_id, q.threat_name, q.q_value, ref))
    return out


# ---------------------------------------------------------------------------
# Emergency ranking with threat context
# ---------------------------------------------------------------------------

def emergency_ranking(project: ProjectFile) -> list[dict]:
    """Scenario records ordered by ascending MTPD, with threat names."""
    names = {t.id: t.name for t in project.model.threats}
    ordered = rank_by_emergency(list(project.bia_records))
    return [
        {
            "threat_id": r.scenario_id,
            "threat": names.get(r.scenario_id, r.scenario_id),
            "mtpd_hours": r.mtpd_hours,
        }
        for r in ordered
    ]


# ---------------------------------------------------------------------------
# ROSI helpers
# ---------------------------------------------------------------------------

def resolve_threat_ids(project: ProjectFile, refs: list[str]) -> list[str]:
    """Map threat ids or names to ids; unknown references fail."""
    by_id = {t.id for t in project.model.threats}
    by_name = {t.name: t.id for t in project.model.threats}
    resolved = []
    for ref in refs:
        if ref in by_id:
            resolved.append(ref)
        elif ref in by_name:
            resolved.append(by_name[ref])
        else:
            raise DanglingReference(f"unknown threat {ref!r}")
    return resolved


def evaluate_adhoc_control(project: ProjectFile, quantified: list[QuantifiedThreat],
                           cost_major, rate: float, threat_refs: list[str],
                           name: str = "ad-hoc control"):
    ids = resolve_threat_ids(project, threat_refs)
    control = SecurityControl(
        id="adhoc",
        name=name,
        annual_cost=Money.from_major(cost_major, project.meta.currency),
        mitigation_rate=rate,
        mitigated_threat_ids=tuple(ids),
    )
    return evaluate_rosi(control, quantified)


# ---------------------------------------------------------------------------
# Classification with persistence
# ---------------------------------------------------------------------------

_PRINCIPLE_ALIASES = {
    "c": SecurityPrinciple.CONFIDENTIALITY,
    "confidentiality": SecurityPrinciple.CONFIDENTIALITY,
    "i": SecurityPrinciple.INTEGRITY,
    "integrity": SecurityPrinciple.INTEGRITY,
    "a": SecurityPrinciple.AVAILABILITY,
    "availability": SecurityPrinciple.AVAILABILITY,
    "acc": SecurityPrinciple.ACCOUNTABILITY,
    "accountability": SecurityPrinciple.ACCOUNTABILITY,
}


def parse_principle_list(raw: str) -> frozenset:
    """Parse 'A,C' / 'Availability, confidentiality' style principal lists."""
    values = set()
    for token in raw.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in _PRINCIPLE_ALIASES:
            raise InvalidValue(f"unknown security principle {token!r} "
                               "(use C, I, A, ACC or full names)")
        values.add(_PRINCIPLE_ALIASES[token])
    return frozenset(values)


def classify_for_project(project: ProjectFile, threat_ref: str,
                         override: frozenset | None = None):
    """Classify a threat name; persist when the threat exists in the project.

    Returns (principles, updated_project_or_None). The heuristic result is
    used unless an explicit override set is given.
    """
    target_id = None
    display_name = threat_ref
    for t in project.model.threats:
        if threat_ref in (t.id, t.name):
            target_id = t.id
            display_name = t.name
            break
    principles = override if override is not None else classify_ciaa(display_name)
    updated = None
    if target_id is not None:
        updated = project.with_classification(target_id, principles)
    return sort_principles(principles), updated


# ---------------------------------------------------------------------------
# Serialization shared by CLI --json and the HTTP API
# ---------------------------------------------------------------------------

def money_dict(m: Money) -> dict:
    return {"amount_minor": m.amount_minor, "currency": m.currency}


def duration_value(d: Duration):
    return "inf" if d.is_infinite else d.hours


def quantified_as_dict(q: QuantifiedThreat, reference: Money | None = None) -> dict:
    doc = {
        "threat_id": q.threat_id,
        "threat": q.threat_name,
        "q": money_dict(q.q_value),
        "duration_hours": duration_value(q.duration),
        "contributions": [
            {"effect_id": eid, "amount": money_dict(m)} for eid, m in q.contributions
        ],
    }
    if reference is not None:
        tolerance = 10 ** currency_exponent(reference.currency)
        doc["reference"] = money_dict(reference)
        doc["reference_diverges"] = (
            reference.currency != q.q_value.currency
            or abs(reference.amount_minor - q.q_value.amount_minor) > tolerance)
    return doc


def quantify_report(project: ProjectFile) -> tuple[list[dict], list[ReferenceDivergence]]:
    """Quantify and serialize in one step; returns (items, divergences)."""
    quantified = quantify_project(project)
    items = [
        quantified_as_dict(q, reference=project.reference_q_for(q.threat_id))
        for q in quantified
    ]
    return items, reference_divergences(project, quantified)


def rosi_as_dict(result) -> dict:
    return {
        "mitigated_impact": money_dict(result.mitigated_impact),
        "control_cost": money_dict(result.control_cost),
        "absolute_return": money_dict(result.absolute_return),
        "cost_effective": result.cost_effective,
    }


def estimate_warnings(record) -> list[str]:
    """Recovery-curve lint notes for one record (non-blocking)."""
    notes = []
    for imp in record.persistent:
        for note in recovery_lint(imp.stages):
            notes.append(f"{imp.factor_id}: {note}")
    return notes


# ---------------------------------------------------------------------------
# File-system helpers (atomic writes)
# ---------------------------------------------------------------------------

def read_project(path: str | Path) -> ProjectFile:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise IoFailure(f"cannot read project file {path}: {exc}")
    return load_project(data)


def write_project(project: ProjectFile, path: str | Path) -> None:
    """Write canonically via a temp file and atomic rename."""
    path = Path(path)
    data = save_project(project)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fp:
                fp.write(data)
                fp.flush()
                os.fsync(fp.fileno())
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
    except OSError as exc:
        raise IoFailure(f"cannot write project file {path}: {exc}")
