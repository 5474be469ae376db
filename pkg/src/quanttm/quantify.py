"""Per-threat loss expectancy, yearly quantification, rankings, and ROSI.

A threat's yearly figure is the sum over its business effects of
``p_initiation * p_success * effect loss expectancy``. The effect loss is
the scenario's BIA estimate for that effect, scaled by the degree of impact,
with persistent stages truncated at the threat's duration; one-time losses
are never truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext

from .bia import BiaRecord, persistent_loss_exact
from .errors import DanglingReference, InvalidValue, MissingEstimate, MixedCurrency
from .model import Duration, ThreatAssetLink, ThreatEffect, ThreatScenario
from .money import DECIMAL_PRECISION, Money, dec, round_half_up

HOURS_PER_DAY = 24


@dataclass(frozen=True)
class QuantifiedThreat:
    """Yearly monetary figure for one threat with per-effect contributions."""

    threat_id: str
    threat_name: str
    q_value: Money
    duration: Duration
    contributions: tuple[tuple[str, Money], ...]

    def __post_init__(self):
        total = sum(m.amount_minor for _, m in self.contributions)
        if total != self.q_value.amount_minor:
            raise InvalidValue(
                f"q_value {self.q_value.amount_minor} != sum of contributions {total}")
        for effect_id, m in self.contributions:
            if m.amount_minor < 0:
                raise InvalidValue(f"contribution for {effect_id!r} is negative")


@dataclass(frozen=True)
class SecurityControl:
    id: str
    name: str
    annual_cost: Money
    mitigation_rate: float
    mitigated_threat_ids: tuple[str, ...]

    def __post_init__(self):
        if not self.id:
            raise InvalidValue("control id must be non-empty")
        if self.annual_cost.amount_minor < 0:
            raise InvalidValue(f"annual_cost must be >= 0, got {self.annual_cost.format()}")
        rate = float(self.mitigation_rate)
        if math.isnan(rate) or not 0.0 <= rate <= 1.0:
            raise InvalidValue(f"mitigation_rate must be in [0, 1], got {self.mitigation_rate!r}")
        object.__setattr__(self, "mitigation_rate", rate)
        ids = tuple(self.mitigated_threat_ids)
        if not ids:
            raise InvalidValue(f"control {self.id!r} must mitigate at least one threat")
        object.__setattr__(self, "mitigated_threat_ids", ids)


@dataclass(frozen=True)
class RosiResult:
    """Economic return of a control: mitigated impact minus control cost."""

    mitigated_impact: Money
    control_cost: Money
    absolute_return: Money
    cost_effective: bool

    def __post_init__(self):
        expected = self.mitigated_impact.amount_minor - self.control_cost.amount_minor
        if self.absolute_return.amount_minor != expected:
            raise InvalidValue("absolute_return must equal mitigated_impact - control_cost")
        if self.cost_effective != (self.absolute_return.amount_minor > 0):
            raise InvalidValue("cost_effective must mean absolute_return > 0")


# ---------------------------------------------------------------------------
# Loss expectancy and quantification
# ---------------------------------------------------------------------------

def _truncated_persistent_minor(record: BiaRecord, effect_id: str, duration: Duration) -> Decimal:
    """Persistent loss for one effect with the stage timeline capped at the
    threat duration. Stages are consumed in order; a stage straddling the
    cap contributes its partial days."""
    _, persistent = record.impacts_for_effect(effect_id)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        total = Decimal(0)
        if duration.is_infinite:
            for imp in persistent:
                total += persistent_loss_exact(imp)
            return total
        cap_days = dec(duration.hours) / HOURS_PER_DAY
        for imp in persistent:
            daily = Decimal(imp.daily_loss.amount_minor)
            consumed = Decimal(0)
            for stage in imp.stages:
                remaining = cap_days - consumed
                if remaining <= 0:
                    break
                used = min(dec(stage.days), remaining)
                total += daily * (1 - dec(stage.recovery_level)) * used
                consumed += dec(stage.days)
        return total


def loss_expectancy(effect: ThreatEffect, duration: Duration, record: BiaRecord) -> Money:
    """Expected loss of one effect: degree times its BIA estimate, with
    persistent stages truncated at a finite duration.

    One-time impacts are duration-independent. Raises MissingEstimate when
    the record does not cover the effect.
    """
    if not record.covers(effect.id):
        raise MissingEstimate(f"no impact estimate for effect {effect.id!r}")
    one_time, _ = record.impacts_for_effect(effect.id)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        base = Decimal(sum(i.amount.amount_minor for i in one_time))
        base += _truncated_persistent_minor(record, effect.id, duration)
        return Money(round_half_up(dec(effect.degree) * base), record.currency)


def quantify_threat(
    link: ThreatAssetLink,
    scenario: ThreatScenario,
    record: BiaRecord,
    threat_name: str | None = None,
) -> QuantifiedThreat:
    """Quantify one threat-asset link over the scenario's effects.

    Each effect contributes ``p_initiation * p_success * loss_expectancy``,
    rounded half-up to minor units per effect; the yearly figure is their sum.
    """
    if scenario.threat_id != link.threat_id:
        raise DanglingReference(
            f"scenario belongs to {scenario.threat_id!r}, link to {link.threat_id!r}")
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        p = dec(link.p_initiation) * dec(link.p_success)
        contributions = []
        total = 0
        for effect in scenario.effects:
            duration = effect.duration_override or link.duration
            expectancy = loss_expectancy(effect, duration, record)
            minor = round_half_up(p * expectancy.amount_minor)
            contributions.append((effect.id, Money(minor, record.currency)))
            total += minor
    return QuantifiedThreat(
        threat_id=link.threat_id,
        threat_name=threat_name or link.threat_id,
        q_value=Money(total, record.currency),
        duration=link.duration,
        contributions=tuple(contributions),
    )


# ---------------------------------------------------------------------------
# Rankings and control evaluation
# ---------------------------------------------------------------------------

def rank_by_impact(quantified: list[QuantifiedThreat]) -> list[QuantifiedThreat]:
    """Descending yearly figure; ties broken by ascending threat name."""
    currencies = {q.q_value.currency for q in quantified}
    if len(currencies) > 1:
        raise MixedCurrency(f"cannot rank across currencies: {sorted(currencies)}")
    return sorted(quantified, key=lambda q: (-q.q_value.amount_minor, q.threat_name))


def rank_by_emergency(records: list[BiaRecord]) -> list[BiaRecord]:
    """Ascending maximum tolerable period of disruption; records without an
    MTPD sort last; stable for equal values."""
    return sorted(records, key=lambda r: (r.mtpd_hours is None, r.mtpd_hours or 0.0))


def evaluate_rosi(control: SecurityControl, quantified: list[QuantifiedThreat]) -> RosiResult:
    """Return on a security control against the quantified threats it covers.

    Mitigated impact is ``mitigation_rate`` times the summed yearly figures
    of the mitigated threats; the absolute return subtracts the yearly cost.
    """
    by_id = {q.threat_id: q for q in quantified}
    covered = []
    for tid in control.mitigated_threat_ids:
        if tid not in by_id:
            raise DanglingReference(f"control {control.id!r} references unknown threat {tid!r}")
        covered.append(by_id[tid])
    currencies = {q.q_value.currency for q in covered} | {control.annual_cost.currency}
    if len(currencies) > 1:
        raise MixedCurrency(f"control cost and threat figures mix currencies: {sorted(currencies)}")
    currency = control.annual_cost.currency
    with localcontext() as ctx:
        ctx.prec = DECIMAL_PRECISION
        mitigated_minor = round_half_up(
            dec(control.mitigation_rate) * sum(q.q_value.amount_minor for q in covered))
    mitigated = Money(mitigated_minor, currency)
    absolute = mitigated - control.annual_cost
    return RosiResult(
        mitigated_impact=mitigated,
        control_cost=control.annual_cost,
        absolute_return=absolute,
        cost_effective=absolute.amount_minor > 0,
    )
