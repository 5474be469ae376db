"""Shared fixtures, random-instance builders, and brute-force oracles.

The oracles recompute losses by expanding recovery stages into individual
days and walking them one by one; the engine must agree with them exactly
(integer minor units). They share only the rounding contract (half-up, once
per returned amount), never the stage arithmetic.
"""

from __future__ import annotations

import random
import string
from decimal import Decimal

import pytest

from quanttm.bia import BiaRecord, OneTimeImpact, PersistentImpact, RecoveryStage
from quanttm.catalog import BUILTIN_FACTORS
from quanttm.model import (
    Asset,
    AssetKind,
    Duration,
    SecurityPrinciple,
    ThreatAssetLink,
    ThreatEffect,
    ThreatEvent,
    ThreatModel,
    ThreatScenario,
)
from quanttm.money import Money, dec, round_half_up
from quanttm.project import BaselineData, ProjectFile, ProjectMeta, load_fixture
from quanttm.quantify import SecurityControl


@pytest.fixture(scope="session")
def fixture_project():
    return load_fixture()


@pytest.fixture()
def project_path(tmp_path):
    """A writable copy of the bundled case-study project."""
    from quanttm.project import fixture_path

    path = tmp_path / "swiss-sme.json"
    path.write_bytes(fixture_path().read_bytes())
    return path


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def oracle_persistent_minor(impact: PersistentImpact, cap_days: int | None = None) -> Decimal:
    """Day-by-day accumulation of residual daily loss (integer stage days)."""
    total = Decimal(0)
    daily = Decimal(impact.daily_loss.amount_minor)
    day = 0
    for stage in impact.stages:
        assert stage.days == int(stage.days), "oracle requires integer days"
        for _ in range(int(stage.days)):
            day += 1
            if cap_days is None or day <= cap_days:
                total += daily * (1 - dec(stage.recovery_level))
    return total


def oracle_persistent_loss(impact: PersistentImpact) -> int:
    return round_half_up(oracle_persistent_minor(impact))


def oracle_record_total(record: BiaRecord) -> int:
    """Scenario total in minor units: per-impact rounding, then a plain sum."""
    total = 0
    for imp in record.one_time:
        total += imp.amount.amount_minor
    for imp in record.persistent:
        total += round_half_up(oracle_persistent_minor(imp))
    return total


def oracle_loss_expectancy(effect: ThreatEffect, duration: Duration, record: BiaRecord) -> int:
    """Independent effect loss: day-walk with a duration cap in whole days."""
    one_time, persistent = record.impacts_for_effect(effect.id)
    base = Decimal(sum(i.amount.amount_minor for i in one_time))
    cap = None if duration.is_infinite else int(duration.hours) // 24
    if not duration.is_infinite:
        assert duration.hours % 24 == 0, "oracle requires whole-day durations"
    for imp in persistent:
        base += oracle_persistent_minor(imp, cap_days=cap)
    return round_half_up(dec(effect.degree) * base)


def oracle_quantify_minor(link: ThreatAssetLink, scenario: ThreatScenario,
                          record: BiaRecord) -> tuple[int, list[int]]:
    """Term-by-term expansion of the yearly figure."""
    p = dec(link.p_initiation) * dec(link.p_success)
    terms = []
    for effect in scenario.effects:
        duration = effect.duration_override or link.duration
        expectancy = oracle_loss_expectancy(effect, duration, record)
        terms.append(round_half_up(p * expectancy))
    return sum(terms), terms


# ---------------------------------------------------------------------------
# Random instance builders (seeded by the caller)
# ---------------------------------------------------------------------------

RECOVERY_LEVELS = (0.0, 0.1, 0.25, 0.3, 0.5, 0.6, 0.75, 0.8, 0.9, 1.0)


def random_stages(rng: random.Random, max_stages: int = 5) -> tuple[RecoveryStage, ...]:
    return tuple(
        RecoveryStage(rng.choice(RECOVERY_LEVELS), rng.randint(0, 10))
        for _ in range(rng.randint(1, max_stages))
    )


def random_record(rng: random.Random, scenario_id: str = "s", effect_ids=("e1",),
                  currency: str = "USD", max_impacts: int = 6) -> BiaRecord:
    factor_ids = [f.id for f in BUILTIN_FACTORS]
    one_time = []
    persistent = []
    for _ in range(rng.randint(0, max_impacts)):
        eid = rng.choice(effect_ids)
        fid = rng.choice(factor_ids)
        if rng.random() < 0.5:
            one_time.append(OneTimeImpact(eid, fid, Money(rng.randint(0, 10_000_00), currency)))
        else:
            persistent.append(PersistentImpact(
                eid, fid, Money(rng.randint(0, 5_000_00), currency), random_stages(rng)))
    return BiaRecord(
        scenario_id=scenario_id,
        estimated_effects=tuple(effect_ids),
        one_time=tuple(one_time),
        persistent=tuple(persistent),
        mtpd_hours=rng.choice([None, 24.0, 48.0, 72.0, 168.0]),
        currency=currency,
    )


def random_ident(rng: random.Random, prefix: str) -> str:
    return prefix + "-" + "".join(rng.choice(string.ascii_lowercase) for _ in range(6))


def random_project(rng: random.Random) -> ProjectFile:
    """A small, fully cross-referenced project with arbitrary content."""
    n_threats = rng.randint(1, 5)
    threats = tuple(
        ThreatEvent(f"t{i}", random_ident(rng, "threat"), "generated")
        for i in range(n_threats)
    )
    assets = tuple(
        Asset(f"a{i}", random_ident(rng, "asset"),
              rng.choice(list(AssetKind)), "generated")
        for i in range(rng.randint(1, 2))
    )
    links = tuple(
        ThreatAssetLink(
            t.id, rng.choice(assets).id,
            round(rng.random(), 3), round(rng.random(), 3),
            Duration.infinite() if rng.random() < 0.3 else Duration(rng.randint(0, 14) * 24),
        )
        for t in threats
    )
    scenarios = []
    records = []
    for t in threats:
        if rng.random() < 0.25:
            continue
        effects = tuple(
            ThreatEffect(
                f"{t.id}-e{j}",
                random_ident(rng, "effect"),
                degree=rng.choice((0.25, 0.5, 0.75, 0.8, 1.0)),
                duration_override=Duration(rng.randint(1, 7) * 24) if rng.random() < 0.2 else None,
                principles=frozenset(rng.sample(list(SecurityPrinciple), rng.randint(0, 2))),
            )
            for j in range(rng.randint(1, 4))
        )
        scenarios.append(ThreatScenario(t.id, effects))
        if rng.random() < 0.8:
            records.append(random_record(
                rng, scenario_id=t.id, effect_ids=tuple(e.id for e in effects)))
    controls = tuple(
        SecurityControl(
            f"c{i}", random_ident(rng, "control"),
            Money(rng.randint(0, 100_000_00), "USD"),
            round(rng.random(), 2),
            (rng.choice(threats).id,),
        )
        for i in range(rng.randint(0, 2))
    )
    classified = tuple(
        (t.id, frozenset(rng.sample(list(SecurityPrinciple), rng.randint(1, 3))))
        for t in threats if rng.random() < 0.4
    )
    reference = tuple(
        (t.id, Money(rng.randint(0, 10_000_00), "USD"))
        for t in threats if rng.random() < 0.3
    )
    return ProjectFile(
        meta=ProjectMeta(
            name=random_ident(rng, "project"),
            currency="USD",
            conversion_rates=(("CHF", 1.08),) if rng.random() < 0.5 else (),
            created="2024-01-01T00:00:00Z",
            reference_q=reference,
            notes=("generated instance",) if rng.random() < 0.5 else (),
        ),
        model=ThreatModel(threats, assets, links),
        scenarios=tuple(scenarios),
        classifications=classified,
        bia_records=tuple(records),
        controls=controls,
        baselines=BaselineData(),
    )
