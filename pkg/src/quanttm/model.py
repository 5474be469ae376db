"""Technical threat model and its translation to business-level scenarios.

The model lives on two layers: threat events hitting concrete assets with
initiation/success probabilities and a duration (information-systems view),
and per-threat lists of business disruptions with a degree of impact
(business-process view). Everything is immutable after construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import (
    DanglingReference,
    DuplicateId,
    InvalidValue,
    ProbabilityOutOfRange,
)


class SecurityPrinciple(str, Enum):
    """The four security objectives used to classify scenarios and factors."""

    CONFIDENTIALITY = "Confidentiality"
    INTEGRITY = "Integrity"
    AVAILABILITY = "Availability"
    ACCOUNTABILITY = "Accountability"


#: Canonical display order for principle sets.
PRINCIPLE_ORDER = (
    SecurityPrinciple.CONFIDENTIALITY,
    SecurityPrinciple.INTEGRITY,
    SecurityPrinciple.AVAILABILITY,
    SecurityPrinciple.ACCOUNTABILITY,
)


def sort_principles(principles) -> tuple[SecurityPrinciple, ...]:
    return tuple(p for p in PRINCIPLE_ORDER if p in set(principles))


@dataclass(frozen=True)
class Duration:
    """How long a threat event impacts the organization, in hours.

    ``Duration.infinite()`` models permanent compromise (e.g. leaked data
    stays leaked); it serializes as the string "inf".
    """

    hours: float

    def __post_init__(self):
        h = float(self.hours)
        if math.isnan(h) or h < 0:
            raise InvalidValue(f"duration must be >= 0 hours or infinite, got {self.hours!r}")
        object.__setattr__(self, "hours", h)

    @classmethod
    def infinite(cls) -> "Duration":
        return cls(math.inf)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.hours)

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        return f"{self.hours:g}h"


def _require_id(value: str, what: str) -> None:
    if not isinstance(value, str) or not value:
        raise InvalidValue(f"{what} id must be a non-empty string, got {value!r}")


def _require_name(value: str, what: str) -> None:
    if not isinstance(value, str) or not value.strip():
        raise InvalidValue(f"{what} name must be non-empty, got {value!r}")


class AssetKind(str, Enum):
    FUNCTIONAL = "functional"
    DATA = "data"


@dataclass(frozen=True)
class Asset:
    id: str
    name: str
    kind: AssetKind
    description: str = ""

    def __post_init__(self):
        _require_id(self.id, "asset")
        _require_name(self.name, "asset")
        object.__setattr__(self, "kind", AssetKind(self.kind))


@dataclass(frozen=True)
class ThreatEvent:
    id: str
    name: str
    description: str = ""

    def __post_init__(self):
        _require_id(self.id, "threat")
        _require_name(self.name, "threat")


def _check_probability(value, what: str) -> float:
    try:
        p = float(value)
    except (TypeError, ValueError):
        raise ProbabilityOutOfRange(f"{what} must be a number in [0, 1], got {value!r}")
    if math.isnan(p) or not 0.0 <= p <= 1.0:
        raise ProbabilityOutOfRange(f"{what} must be in [0, 1], got {value!r}")
    return p


@dataclass(frozen=True)
class ThreatAssetLink:
    """One threat targeting one asset, with its likelihood parameters.

    ``p_initiation`` is the yearly probability that the attack is attempted,
    ``p_success`` the probability that an attempt succeeds.
    """

    threat_id: str
    asset_id: str
    p_initiation: float
    p_success: float
    duration: Duration

    def __post_init__(self):
        _require_id(self.threat_id, "link threat")
        _require_id(self.asset_id, "link asset")
        object.__setattr__(self, "p_initiation", _check_probability(self.p_initiation, "p_initiation"))
        object.__setattr__(self, "p_success", _check_probability(self.p_success, "p_success"))
        if not isinstance(self.duration, Duration):
            object.__setattr__(self, "duration", Duration(self.duration))


@dataclass(frozen=True)
class ThreatModel:
    """The technical layer: threats, assets, and their probabilistic links.

    The aggregate itself does not re-validate cross references so that
    :func:`validate_model` can report violations on hand-built instances;
    use :func:`build_threat_model` to construct a checked model.
    """

    threats: tuple[ThreatEvent, ...] = ()
    assets: tuple[Asset, ...] = ()
    links: tuple[ThreatAssetLink, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "threats", tuple(self.threats))
        object.__setattr__(self, "assets", tuple(self.assets))
        object.__setattr__(self, "links", tuple(self.links))

    def threat_by_id(self, threat_id: str) -> ThreatEvent:
        for t in self.threats:
            if t.id == threat_id:
                return t
        raise DanglingReference(f"unknown threat id {threat_id!r}")

    def asset_by_id(self, asset_id: str) -> Asset:
        for a in self.assets:
            if a.id == asset_id:
                return a
        raise DanglingReference(f"unknown asset id {asset_id!r}")

    def links_for_threat(self, threat_id: str) -> tuple[ThreatAssetLink, ...]:
        return tuple(l for l in self.links if l.threat_id == threat_id)


@dataclass(frozen=True)
class ThreatEffect:
    """A business-level disruption caused by a threat.

    ``degree`` is the compromise ratio on the asset in (0, 1]; a disruption
    that only hits 80% of sales is modeled with degree 0.8. The optional
    duration override supersedes the threat link's duration for this effect.
    """

    id: str
    description: str
    degree: float = 1.0
    duration_override: Duration | None = None
    principles: frozenset = frozenset()

    def __post_init__(self):
        _require_id(self.id, "effect")
        if not isinstance(self.description, str) or not self.description.strip():
            raise InvalidValue(f"effect description must be non-empty, got {self.description!r}")
        try:
            deg = float(self.degree)
        except (TypeError, ValueError):
            raise InvalidValue(f"degree must be a number in (0, 1], got {self.degree!r}")
        if math.isnan(deg) or not 0.0 < deg <= 1.0:
            raise InvalidValue(f"degree must be in (0, 1], got {self.degree!r}")
        object.__setattr__(self, "degree", deg)
        object.__setattr__(
            self, "principles", frozenset(SecurityPrinciple(p) for p in self.principles)
        )


@dataclass(frozen=True)
class ThreatScenario:
    """A threat joined to its ordered business effects."""

    threat_id: str
    effects: tuple[ThreatEffect, ...]

    def __post_init__(self):
        _require_id(self.threat_id, "scenario threat")
        effects = tuple(self.effects)
        if not effects:
            raise InvalidValue(f"scenario for {self.threat_id!r} must have at least one effect")
        object.__setattr__(self, "effects", effects)

    def effect_by_id(self, effect_id: str) -> ThreatEffect:
        for e in self.effects:
            if e.id == effect_id:
                return e
        raise DanglingReference(f"unknown effect id {effect_id!r} in scenario {self.threat_id!r}")


@dataclass(frozen=True)
class Violation:
    """One broken invariant: where, which rule, and a human message."""

    path: str
    rule: str
    message: str


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

_RULE_ERRORS = {
    "duplicate_id": DuplicateId,
    "dangling_reference": DanglingReference,
}


def validate_model(model: ThreatModel) -> list[Violation]:
    """Check aggregate invariants; violations are data, not failures."""
    violations: list[Violation] = []
    seen_threats: set[str] = set()
    for i, t in enumerate(model.threats):
        if t.id in seen_threats:
            violations.append(Violation(f"threats[{i}]", "duplicate_id", f"duplicate threat id {t.id!r}"))
        seen_threats.add(t.id)
    seen_assets: set[str] = set()
    for i, a in enumerate(model.assets):
        if a.id in seen_assets:
            violations.append(Violation(f"assets[{i}]", "duplicate_id", f"duplicate asset id {a.id!r}"))
        seen_assets.add(a.id)
    seen_pairs: set[tuple[str, str]] = set()
    for i, link in enumerate(model.links):
        if link.threat_id not in seen_threats:
            violations.append(Violation(
                f"links[{i}].threat_id", "dangling_reference",
                f"link references unknown threat {link.threat_id!r}"))
        if link.asset_id not in seen_assets:
            violations.append(Violation(
                f"links[{i}].asset_id", "dangling_reference",
                f"link references unknown asset {link.asset_id!r}"))
        pair = (link.threat_id, link.asset_id)
        if pair in seen_pairs:
            violations.append(Violation(
                f"links[{i}]", "duplicate_id",
                f"duplicate link for threat {link.threat_id!r} and asset {link.asset_id!r}"))
        seen_pairs.add(pair)
    return violations


def build_threat_model(threats, assets, links) -> ThreatModel:
    """Construct a validated threat model; the relation is exactly ``links``."""
    model = ThreatModel(tuple(threats), tuple(assets), tuple(links))
    violations = validate_model(model)
    if violations:
        first = violations[0]
        exc = _RULE_ERRORS.get(first.rule, InvalidValue)
        raise exc(first.message, path=first.path)
    return model


def translate_to_scenarios(
    model: ThreatModel,
    effect_mapping: list[tuple[str, list[ThreatEffect]]],
) -> list[ThreatScenario]:
    """Attach business effects to threats, one scenario per mapped threat.

    Effect order is preserved as entered; threats absent from the mapping do
    not appear in the output.
    """
    known = {t.id for t in model.threats}
    scenarios = []
    for threat_id, effects in effect_mapping:
        if threat_id not in known:
            raise DanglingReference(f"effect mapping references unknown threat {threat_id!r}")
        scenarios.append(ThreatScenario(threat_id, tuple(effects)))
    return scenarios
