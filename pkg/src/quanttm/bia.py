"""Business impact analysis: classification, factor suggestion, loss math.

The loss model distinguishes one-time impacts (a single amount) from
persistent impacts (a daily loss decaying through recovery stages). A
recovery stage ``(level, days)`` says the business runs at ``level`` of
normal for ``days`` days, so the residual daily loss is
``daily_loss * (1 - level)``. Scenario loss is the sum of all persistent
stage losses plus all one-time amounts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from decimal import Decimal, localcontext

from .catalog import (
    KEYWORD_TABLE,
    FactorCatalog,
    ImpactFactor,
    KeywordEntry,
    Tangibility,
    normalize_threat_name,
)
from .errors import InvalidValue, MixedCurrency
from .model import SecurityPrinciple
from .money import DECIMAL_PRECISION, Money, dec, round_half_up, validate_currency

__all__ = [
    "OneTimeImpact", "RecoveryStage", "PersistentImpact", "BiaRecord",
    "LossBreakdown", "RecoveryLintWarning", "classify_ciaa", "suggest_factors",
    "compute_persistent_loss", "compute_scenario_loss", "recovery_lint",
]


class RecoveryLintWarning(UserWarning):
    """Non-fatal modeling smell, e.g. recovery levels that decrease."""


@dataclass(frozen=True)
class OneTimeImpact:
    """A single loss amount attributed to one effect and factor."""

    effect_id: str
    factor_id: str
    amount: Money

    def __post_init__(self):
        if self.amount.amount_minor < 0:
            raise InvalidValue(
                f"one-time amount must be >= 0, got {self.amount.format()}")


@dataclass(frozen=True)
class RecoveryStage:
    """The business runs at ``recovery_level`` of normal for ``days`` days."""

    recovery_level: float
    days: float

    def __post_init__(self):
        lvl = float(self.recovery_level)
        days = float(self.days)
        if math.isnan(lvl) or not 0.0 <= lvl <= 1.0:
            raise InvalidValue(f"recovery_level must be in [0, 1], got {self.recovery_level!r}")
        if math.isnan(days) or math.isinf(days) or days < 0:
            raise InvalidValue(f"stage days must be a finite number >= 0, got {self.days!r}")
        object.__setattr__(self, "recovery_level", lvl)
        object.__setattr__(self, "days", days)


def recovery_lint(stages) -> list[str]:
    """Return human warnings for suspicious recovery curves (never fatal)."""
    notes = []
    prev = None
    for i, s in enumerate(stages):
        if prev is not None and s.recovery_level < prev:
            notes.append(
                f"recovery level decreases from {prev:g} to {s.recovery_level:g} at stage {i}")
        prev = s.recovery_level
    return notes


@dataclass(frozen=True)
class PersistentImpact:
    """A daily loss that decays through ordered recovery stages."""

    effect_id: str
    factor_id: str
    daily_loss: Money
    stages: tuple[RecoveryStage, ...]

    def __post_init__(self):
        if self.daily_loss.amount_minor < 0:
            raise InvalidValue(f"daily_loss must be >= 0, got {self.daily_loss.format()}")
        stages = tuple(self.stages)
        if not stages:
            raise InvalidValue(f"persistent impact {self.factor_id!r} needs at least one stage")
        object.__setattr__(self, "stages", stages)
        for note in recovery_lint(stages):
            warnings.warn(f"{self.factor_id}: {note}", RecoveryLintWarning, stacklevel=2)


@dataclass(frozen=True)
class BiaRecord:
    """Impact estimates for one scenario, itemized per effect.

    ``estimated_effects`` lists every effect id the analysis covered; an
    effect listed there with no impact rows was assessed as zero loss, which
    is different from an effect that was never estimated.
    """

    scenario_id: str
    estimated_effects: tuple[str, ...] = ()
    one_time: tuple[OneTimeImpact, ...] = ()
    persistent: tuple[PersistentImpact, ...] = ()
    mtpd_hours: float | None = None
    currency: str = "USD"

    def __post_init__(self):
        validate_currency(self.currency)
        object.__setattr__(self, "estimated_effects", tuple(self.estimated_effects))
        object.__setattr__(self, "one_time", tuple(self.one_time))
        object.__setattr__(self, "persistent", tuple(self.persistent))
        if self.mtpd_hours is not None:
            m = float(self.mtpd_hours)
            if math.isnan(m) or m <= 0:
                raise InvalidValue(f"mtpd_hours must be positive, got {self.mtpd_hours!r}")
            object.__setattr__(self, "mtpd_hours", m)
        covered = set(self.estimated_effects)
        for imp in self.one_time + self.persistent:
            money = imp.amount if isinstance(imp, OneTimeImpact) else imp.daily_loss
            if money.currency != self.currency:
                raise MixedCurrency(
                    f"impact on factor {imp.factor_id!r} uses {money.currency}, "
                    f"record uses {self.currency}")
            if imp.effect_id not in covered:
                raise InvalidValue(
                    f"impact references effect {imp.effect_id!r} "
                    f"not listed in estimated_effects")

    def impacts_for_effect(self, effect_id: str) -> tuple[tuple, tuple]:
        ot = tuple(i for i in self.one_time if i.effect_id == effect_id)
        ps = tuple(i for i in self.persistent if i.effect_id == effect_id)
        return ot, ps

    def covers(self, effect_id: str) -> bool:
        return effect_id in self.estimated_effects


@dataclass(frozen=True)
class LossBreakdown:
    """Scenario loss with its tangible/intangible and per-factor split.

    Invariant: total == tangible_total + intangible_total == sum of the
    per_factor amounts, exactly, in integer minor units.
    """

    total: Money
    tangible_total: Money
    intangible_total: Money
    per_factor: tuple[tuple[str, Money], ...]
    per_stage_series: tuple[tuple[str, int, Money], ...]


# ---------------------------------------------------------------------------
# Classification and factor suggestion
# ---------------------------------------------------------------------------

def classify_ciaa(threat_name: str, table: tuple[KeywordEntry, ...] = KEYWORD_TABLE) -> frozenset:
    """Heuristically map a threat name to the security principles it affects.

    Case-insensitive whole-word matching against the keyword table; a name
    matching several entries gets the union. No match returns the empty set,
    leaving classification to the analyst.
    """
    if not threat_name or not threat_name.strip():
        raise InvalidValue("threat name must be non-empty")
    haystack = f" {normalize_threat_name(threat_name)} "
    matched: set[SecurityPrinciple] = set()
    for entry in table:
        for kw in entry.keywords:
            if f" {normalize_threat_name(kw)} " in haystack:
                matched.update(entry.principles)
                break
    return frozenset(matched)


def suggest_factors(principles, catalog: FactorCatalog) -> list[ImpactFactor]:
    """Factors whose principles intersect the given set.

    Built-ins come first, tangible before intangible, otherwise catalog
    order; an empty principle set suggests nothing.
    """
    wanted = {SecurityPrinciple(p) for p in principles}
    hits = [f for f in catalog.factors if f.applicable_principles & wanted]
    return sorted(
        hits,
        key=lambda f: (not f.builtin, f.tangibility is not Tangibility.TANGIBLE),
    )


# ---------------------------------------------------------------------------
# Loss computation
# ---------------------------------------------------------------------------

def persistent_loss_exact(impact: PersistentImpact) -> Decimal:
    """Unrounded persistent loss in minor units: sum over stages of
    daily_loss * (1 - recovery_level) * days."""
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        total = Decimal(0)
        daily = Decimal(impact.daily_loss.amount_minor)
        for stage in impact.stages:
            total += daily * (1 - dec(stage.recovery_level)) * dec(stage.days)
        return total


def compute_persistent_loss(impact: PersistentImpact) -> Money:
    """Total loss of one persistent impact, rounded half-up once at the end."""
    return Money(round_half_up(persistent_loss_exact(impact)), impact.daily_loss.currency)


def _stage_loss(impact: PersistentImpact, index: int) -> Money:
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        stage = impact.stages[index]
        value = (Decimal(impact.daily_loss.amount_minor)
                 * (1 - dec(stage.recovery_level)) * dec(stage.days))
        return Money(round_half_up(value), impact.daily_loss.currency)


def compute_scenario_loss(record: BiaRecord, catalog: FactorCatalog) -> LossBreakdown:
    """Aggregate a record into totals, tangible/intangible split, per-factor
    amounts and a per-stage series for plotting.

    Each impact is rounded to minor units independently, so the result is
    invariant under permutation of the impact lists.
    """
    currency = record.currency
    per_factor: dict[str, int] = {}
    per_stage: list[tuple[str, int, Money]] = []
    tangible = 0
    intangible = 0

    def add(factor_id: str, minor: int) -> None:
        nonlocal tangible, intangible
        factor = catalog.get(factor_id)
        per_factor[factor_id] = per_factor.get(factor_id, 0) + minor
        if factor.tangibility is Tangibility.TANGIBLE:
            tangible += minor
        else:
            intangible += minor

    for imp in record.one_time:
        add(imp.factor_id, imp.amount.amount_minor)
    for imp in record.persistent:
        add(imp.factor_id, compute_persistent_loss(imp).amount_minor)
        for i in range(len(imp.stages)):
            per_stage.append((imp.factor_id, i, _stage_loss(imp, i)))

    return LossBreakdown(
        total=Money(tangible + intangible, currency),
        tangible_total=Money(tangible, currency),
        intangible_total=Money(intangible, currency),
        per_factor=tuple((fid, Money(minor, currency)) for fid, minor in per_factor.items()),
        per_stage_series=tuple(per_stage),
    )
