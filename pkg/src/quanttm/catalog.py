"""Built-in impact-factor catalog and threat keyword table.

Both ship as embedded, versioned data and can be exported as JSON for the
web UI. The 16 built-in factors cover the usual loss categories reported in
industry breach-cost studies; nine of them are the canonical suggestions for
availability disruptions. Factor identities beyond those nine are an
informed reconstruction (see README), marked builtin and immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DuplicateId, InvalidValue, UnknownFactor
from .model import SecurityPrinciple, sort_principles

CATALOG_VERSION = 1
KEYWORD_TABLE_VERSION = 1

_C = SecurityPrinciple.CONFIDENTIALITY
_I = SecurityPrinciple.INTEGRITY
_A = SecurityPrinciple.AVAILABILITY
_ACC = SecurityPrinciple.ACCOUNTABILITY


class Tangibility(str, Enum):
    TANGIBLE = "tangible"
    INTANGIBLE = "intangible"


class LossKind(str, Enum):
    """How a factor is estimated: a single amount, or a daily loss that
    decays through recovery stages."""

    ONE_TIME = "one_time"
    PERSISTENT = "persistent"


@dataclass(frozen=True)
class ImpactFactor:
    id: str
    name: str
    tangibility: Tangibility
    applicable_principles: frozenset
    loss_kind: LossKind
    builtin: bool = False

    def __post_init__(self):
        if not self.id or not isinstance(self.id, str):
            raise InvalidValue(f"factor id must be a non-empty string, got {self.id!r}")
        if not self.name or not self.name.strip():
            raise InvalidValue(f"factor name must be non-empty, got {self.name!r}")
        object.__setattr__(self, "tangibility", Tangibility(self.tangibility))
        object.__setattr__(self, "loss_kind", LossKind(self.loss_kind))
        principles = frozenset(SecurityPrinciple(p) for p in self.applicable_principles)
        if not principles:
            raise InvalidValue(f"factor {self.id!r} must apply to at least one principle")
        object.__setattr__(self, "applicable_principles", principles)


def _f(fid, name, tangibility, principles, kind) -> ImpactFactor:
    return ImpactFactor(fid, name, tangibility, frozenset(principles), kind, builtin=True)


#: Catalog order is meaningful: suggestions keep it (tangible block first).
BUILTIN_FACTORS: tuple[ImpactFactor, ...] = (
    _f("product_revenue_loss", "Product revenue loss during service disruption",
       Tangibility.TANGIBLE, {_A}, LossKind.PERSISTENT),
    _f("commercial_agreement_violation", "Violation of commercial agreements with customers",
       Tangibility.TANGIBLE, {_A}, LossKind.ONE_TIME),
    _f("regulatory_penalties", "Regulatory penalties",
       Tangibility.TANGIBLE, {_C, _I, _A}, LossKind.ONE_TIME),
    _f("quality_degradation", "Quality degradation of products",
       Tangibility.TANGIBLE, {_I, _A}, LossKind.PERSISTENT),
    _f("technical_investigation", "Technical investigation cost",
       Tangibility.TANGIBLE, {_C, _I, _A, _ACC}, LossKind.ONE_TIME),
    _f("defense_improvements", "Defense improvements (incident response, post-mortem, mitigation)",
       Tangibility.TANGIBLE, {_C, _I, _A, _ACC}, LossKind.ONE_TIME),
    _f("customer_breach_notification", "Customer breach notification",
       Tangibility.TANGIBLE, {_C}, LossKind.ONE_TIME),
    _f("legal_fees", "Legal fees and litigation",
       Tangibility.TANGIBLE, {_C, _I}, LossKind.ONE_TIME),
    _f("identity_protection_services", "Identity-protection services for affected parties",
       Tangibility.TANGIBLE, {_C}, LossKind.ONE_TIME),
    _f("public_relations_cost", "Public-relations and crisis-communication cost",
       Tangibility.TANGIBLE, {_C, _I}, LossKind.ONE_TIME),
    _f("data_restoration_rework", "Data-restoration and integrity-rework cost",
       Tangibility.TANGIBLE, {_I}, LossKind.ONE_TIME),
    _f("audit_recertification", "Audit and compliance re-certification",
       Tangibility.TANGIBLE, {_C, _I, _ACC}, LossKind.ONE_TIME),
    _f("insurance_premium_increase", "Insurance premium increase",
       Tangibility.INTANGIBLE, {_C, _I, _A}, LossKind.ONE_TIME),
    _f("lost_future_contracts", "Lost future contract revenue",
       Tangibility.INTANGIBLE, {_A, _C}, LossKind.ONE_TIME),
    _f("customer_relationship_degradation", "Customer relationship degradation",
       Tangibility.INTANGIBLE, {_C, _I, _A}, LossKind.PERSISTENT),
    _f("intellectual_property_loss", "Loss of intellectual property",
       Tangibility.INTANGIBLE, {_C}, LossKind.ONE_TIME),
)


@dataclass(frozen=True)
class FactorCatalog:
    """Built-in factors plus project-defined extensions; ids unique."""

    factors: tuple[ImpactFactor, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        seen: set[str] = set()
        for f in factors:
            if f.id in seen:
                raise DuplicateId(f"duplicate factor id {f.id!r}")
            seen.add(f.id)
        object.__setattr__(self, "factors", factors)

    def get(self, factor_id: str) -> ImpactFactor:
        for f in self.factors:
            if f.id == factor_id:
                return f
        raise UnknownFactor(f"unknown impact factor {factor_id!r}")

    def has(self, factor_id: str) -> bool:
        return any(f.id == factor_id for f in self.factors)

    def with_extensions(self, extras) -> "FactorCatalog":
        """Extend with user-defined factors; built-in ids cannot be redefined."""
        builtin_ids = {f.id for f in self.factors if f.builtin}
        extras = tuple(extras)
        for f in extras:
            if f.id in builtin_ids:
                raise DuplicateId(f"factor id {f.id!r} shadows a built-in factor")
            if f.builtin:
                raise InvalidValue(f"extension factor {f.id!r} must not be marked builtin")
        return FactorCatalog(self.factors + extras)

    @property
    def extensions(self) -> tuple[ImpactFactor, ...]:
        return tuple(f for f in self.factors if not f.builtin)


def builtin_catalog() -> FactorCatalog:
    return FactorCatalog(BUILTIN_FACTORS)


# ---------------------------------------------------------------------------
# Threat keyword table for heuristic CIAA classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KeywordEntry:
    name: str
    keywords: tuple[str, ...]
    principles: frozenset


def _k(name, keywords, principles) -> KeywordEntry:
    return KeywordEntry(name, tuple(keywords), frozenset(principles))


#: Commonly observed threats with their typical CIAA footprint. Matching is
#: case-insensitive on whole words; unknown names match nothing.
KEYWORD_TABLE: tuple[KeywordEntry, ...] = (
    _k("DDoS", ("ddos", "denial of service"), {_A}),
    _k("Ransomware", ("ransomware",), {_A, _C}),
    _k("Phishing", ("phishing", "spear phishing"), {_C}),
    _k("SQL injection", ("sql injection", "sqli"), {_C, _I}),
    _k("Cross-site scripting", ("xss", "cross site scripting"), {_C, _I}),
    _k("Cross-site request forgery", ("csrf", "cross site request forgery"), {_I}),
    _k("XML external entity", ("xxe", "xml external entity"), {_C, _I}),
    _k("Insider threat", ("insider threat", "malicious insider"), {_C, _I, _ACC}),
    _k("Malware", ("malware", "virus", "trojan", "worm"), {_C, _I, _A}),
    _k("Botnet", ("botnet",), {_A}),
    _k("Data theft", ("data theft", "data exfiltration", "data leak", "data leakage",
                      "data breach"), {_C}),
    _k("Spoofing", ("spoofing", "impersonation"), {_ACC}),
    _k("Tampering", ("tampering",), {_I}),
    _k("Repudiation", ("repudiation",), {_ACC}),
    _k("Information disclosure", ("information disclosure",), {_C}),
    _k("Privilege escalation", ("privilege escalation", "elevation of privilege"), {_C, _I}),
    _k("Supply-chain compromise", ("supply chain",), {_C, _I}),
    _k("Brute force", ("brute force", "credential stuffing", "password cracking"), {_C}),
    _k("Man-in-the-middle", ("man in the middle", "mitm"), {_C, _I}),
    _k("Insecure deserialization", ("deserialization",), {_I, _A}),
)


def normalize_threat_name(text: str) -> str:
    """Lowercase and strip punctuation so keyword matching sees plain words."""
    cleaned = "".join(ch if ch.isalnum() else " " for ch in text.lower())
    return " ".join(cleaned.split())


def keyword_table_as_dict() -> dict:
    return {
        "version": KEYWORD_TABLE_VERSION,
        "entries": [
            {
                "name": e.name,
                "keywords": list(e.keywords),
                "principles": [p.value for p in sort_principles(e.principles)],
            }
            for e in KEYWORD_TABLE
        ],
    }


def factor_as_dict(f: ImpactFactor) -> dict:
    return {
        "id": f.id,
        "name": f.name,
        "tangibility": f.tangibility.value,
        "applicable_principles": [p.value for p in sort_principles(f.applicable_principles)],
        "loss_kind": f.loss_kind.value,
        "builtin": f.builtin,
    }


def catalog_as_dict(catalog: FactorCatalog | None = None) -> dict:
    catalog = catalog or builtin_catalog()
    return {
        "version": CATALOG_VERSION,
        "factors": [factor_as_dict(f) for f in catalog.factors],
    }
