import random

import pytest

from quanttm.bia import BiaRecord, OneTimeImpact, PersistentImpact, RecoveryStage
from quanttm.errors import DanglingReference, MissingEstimate, MixedCurrency
from quanttm.model import Duration, ThreatAssetLink, ThreatEffect, ThreatScenario
from quanttm.money import Money
from quanttm.pipeline import quantify_project
from quanttm.quantify import (
    QuantifiedThreat,
    SecurityControl,
    evaluate_rosi,
    loss_expectancy,
    quantify_threat,
    rank_by_emergency,
    rank_by_impact,
)

from conftest import oracle_loss_expectancy, oracle_quantify_minor, random_record


def usd(amount):
    return Money.from_major(amount, "USD")


def one_time_record(effect_id, amount, scenario="s"):
    return BiaRecord(scenario, (effect_id,),
                     one_time=(OneTimeImpact(effect_id, "technical_investigation", amount),))


# ---------------------------------------------------------------------------
# loss_expectancy
# ---------------------------------------------------------------------------

def test_ddos_effect_expectancy_is_its_restore_cost():
    effect = ThreatEffect("e1", "Customers cannot order via the shop", degree=1.0)
    record = one_time_record("e1", usd("1620.00"))
    assert loss_expectancy(effect, Duration(48), record) == usd("1620.00")


def test_full_degree_infinite_duration_gives_full_loss():
    effect = ThreatEffect("e1", "data leaked", degree=1.0)
    record = BiaRecord("s", ("e1",), one_time=(
        OneTimeImpact("e1", "legal_fees", usd("700.00")),
    ), persistent=(
        PersistentImpact("e1", "product_revenue_loss", usd("100.00"),
                         (RecoveryStage(0, 3), RecoveryStage(0.5, 4))),
    ))
    # full loss: 700 one-time + 100*3 + 50*4 = 1200
    assert loss_expectancy(effect, Duration.infinite(), record) == usd("1200.00")


def test_degree_scales_one_time_loss():
    effect = ThreatEffect("e1", "partial outage", degree=0.8)
    record = one_time_record("e1", usd("1000.00"))
    assert loss_expectancy(effect, Duration.infinite(), record) == usd("800.00")


def test_degree_scaling_matches_oracle_over_random_degrees():
    rng = random.Random(21)
    for _ in range(100):
        degree = rng.choice((0.1, 0.2, 0.25, 0.4, 0.5, 0.75, 0.8, 0.9, 1.0))
        effect = ThreatEffect("e1", "x", degree=degree)
        record = one_time_record("e1", Money(rng.randint(0, 10**7), "USD"))
        got = loss_expectancy(effect, Duration.infinite(), record)
        assert got.amount_minor == oracle_loss_expectancy(effect, Duration.infinite(), record)


def test_finite_duration_truncates_persistent_stages():
    effect = ThreatEffect("e1", "outage", degree=1.0)
    record = BiaRecord("s", ("e1",), persistent=(
        PersistentImpact("e1", "product_revenue_loss", usd("100.00"),
                         (RecoveryStage(0, 4),)),
    ))
    assert loss_expectancy(effect, Duration(48), record) == usd("200.00")   # 2 of 4 days
    assert loss_expectancy(effect, Duration.infinite(), record) == usd("400.00")
    assert loss_expectancy(effect, Duration(0), record).amount_minor == 0


def test_truncation_splits_straddling_stage():
    effect = ThreatEffect("e1", "outage", degree=1.0)
    record = BiaRecord("s", ("e1",), persistent=(
        PersistentImpact("e1", "product_revenue_loss", usd("100.00"),
                         (RecoveryStage(0, 1), RecoveryStage(0.5, 4))),
    ))
    # 36h = 1.5 days: day 1 full loss, half a day at 50 residual
    assert loss_expectancy(effect, Duration(36), record) == usd("125.00")


def test_one_time_losses_never_truncated():
    effect = ThreatEffect("e1", "penalty", degree=1.0)
    record = one_time_record("e1", usd("5000.00"))
    assert loss_expectancy(effect, Duration(1), record) == usd("5000.00")


def test_missing_estimate_raises():
    effect = ThreatEffect("other", "not covered", degree=1.0)
    record = one_time_record("e1", usd("10.00"))
    with pytest.raises(MissingEstimate):
        loss_expectancy(effect, Duration(1), record)


def test_expectancy_monotone_in_duration_and_degree():
    rng = random.Random(3)
    for _ in range(50):
        stages = tuple(RecoveryStage(rng.choice((0, 0.25, 0.5, 0.75, 1.0)), rng.randint(0, 6))
                       for _ in range(rng.randint(1, 4)))
        record = BiaRecord("s", ("e1",), persistent=(
            PersistentImpact("e1", "product_revenue_loss", Money(rng.randint(0, 10**6), "USD"), stages),
        ), one_time=(OneTimeImpact("e1", "legal_fees", Money(rng.randint(0, 10**6), "USD")),))
        durations = [Duration(0), Duration(24), Duration(72), Duration(24 * 30), Duration.infinite()]
        effect = ThreatEffect("e1", "x", degree=1.0)
        values = [loss_expectancy(effect, d, record).amount_minor for d in durations]
        assert values == sorted(values)
        degrees = (0.1, 0.25, 0.5, 0.75, 1.0)
        by_degree = [
            loss_expectancy(ThreatEffect("e1", "x", degree=g), Duration(48), record).amount_minor
            for g in degrees
        ]
        assert by_degree == sorted(by_degree)


# ---------------------------------------------------------------------------
# quantify_threat
# ---------------------------------------------------------------------------

def test_quantify_ddos_case():
    link = ThreatAssetLink("ddos", "webshop", 0.2, 1.0, Duration(48))
    scenario = ThreatScenario("ddos", (ThreatEffect("e1", "no shop orders", degree=1.0),))
    record = one_time_record("e1", usd("1620.00"), scenario="ddos")
    q = quantify_threat(link, scenario, record, threat_name="DDoS")
    assert q.q_value == usd("324.00")
    assert q.contributions == (("e1", usd("324.00")),)


def test_quantify_deserialization_case():
    link = ThreatAssetLink("deser", "webshop", 0.2, 0.2, Duration(72))
    scenario = ThreatScenario("deser", (
        ThreatEffect("e1", "employees cannot process orders"),
        ThreatEffect("e2", "customers cannot order"),
    ))
    record = BiaRecord("deser", ("e1", "e2"), one_time=(
        OneTimeImpact("e1", "technical_investigation", usd("3240.00")),
        OneTimeImpact("e2", "technical_investigation", usd("1620.00")),
    ))
    q = quantify_threat(link, scenario, record)
    assert q.q_value == usd("194.40")  # rounds to the published 194
    assert [m.amount_minor for _, m in q.contributions] == [12960, 6480]


def test_quantify_zero_probability_product():
    link = ThreatAssetLink("csrf", "webshop", 0.4, 0.1, Duration.infinite())
    scenario = ThreatScenario("csrf", (ThreatEffect("e1", "malicious orders"),))
    record = BiaRecord("csrf", ("e1",))
    q = quantify_threat(link, scenario, record)
    assert q.q_value.amount_minor == 0


def test_quantify_rejects_foreign_scenario():
    link = ThreatAssetLink("a", "x", 0.5, 0.5, Duration(1))
    scenario = ThreatScenario("b", (ThreatEffect("e1", "x"),))
    with pytest.raises(DanglingReference):
        quantify_threat(link, scenario, BiaRecord("b", ("e1",)))


def test_quantify_matches_term_by_term_oracle_on_random_instances():
    rng = random.Random(2024)
    for _ in range(150):
        n_effects = rng.randint(1, 4)
        effect_ids = tuple(f"e{i}" for i in range(n_effects))
        effects = tuple(
            ThreatEffect(
                eid, "generated",
                degree=rng.choice((0.25, 0.5, 0.75, 1.0)),
                duration_override=Duration(rng.randint(0, 10) * 24) if rng.random() < 0.3 else None,
            )
            for eid in effect_ids
        )
        scenario = ThreatScenario("t", effects)
        link = ThreatAssetLink(
            "t", "a",
            rng.choice((0.0, 0.1, 0.2, 0.4, 0.5, 0.6, 1.0)),
            rng.choice((0.0, 0.1, 0.2, 0.5, 1.0)),
            Duration.infinite() if rng.random() < 0.3 else Duration(rng.randint(0, 10) * 24),
        )
        record = random_record(rng, scenario_id="t", effect_ids=effect_ids)
        got = quantify_threat(link, scenario, record)
        want_total, want_terms = oracle_quantify_minor(link, scenario, record)
        assert got.q_value.amount_minor == want_total
        assert [m.amount_minor for _, m in got.contributions] == want_terms


def test_q_linear_in_probabilities_and_loss():
    effect_ids = ("e1", "e2")
    scenario = ThreatScenario("t", tuple(ThreatEffect(e, "x") for e in effect_ids))

    def q_for(p_i, p_s, amounts):
        link = ThreatAssetLink("t", "a", p_i, p_s, Duration.infinite())
        record = BiaRecord("t", effect_ids, one_time=tuple(
            OneTimeImpact(e, "legal_fees", Money(a, "USD"))
            for e, a in zip(effect_ids, amounts)))
        return quantify_threat(link, scenario, record).q_value.amount_minor

    rng = random.Random(11)
    for _ in range(100):
        # sixteenth probabilities with amounts divisible by 256 keep every
        # term integral, so doubling commutes with rounding
        p_i = rng.randint(0, 8) / 16
        p_s = rng.randint(0, 16) / 16
        amounts = [rng.randint(0, 10**4) * 256 for _ in effect_ids]
        base = q_for(p_i, p_s, amounts)
        assert q_for(2 * p_i, p_s, amounts) == 2 * base
        assert q_for(p_i, p_s, [2 * a for a in amounts]) == 2 * base
        if p_s <= 0.5:
            assert q_for(p_i, 2 * p_s, amounts) == 2 * base


def test_q_nonnegative_and_zero_iff_no_terms():
    rng = random.Random(31)
    for _ in range(100):
        effect_ids = ("e1",)
        scenario = ThreatScenario("t", (ThreatEffect("e1", "x"),))
        p_i = rng.choice((0.0, 0.5))
        p_s = rng.choice((0.0, 0.5))
        amount = rng.choice((0, 10_000))
        link = ThreatAssetLink("t", "a", p_i, p_s, Duration.infinite())
        record = BiaRecord("t", effect_ids, one_time=(
            OneTimeImpact("e1", "legal_fees", Money(amount, "USD")),))
        q = quantify_threat(link, scenario, record)
        assert q.q_value.amount_minor >= 0
        assert (q.q_value.amount_minor == 0) == (p_i * p_s * amount == 0)


# ---------------------------------------------------------------------------
# Rankings
# ---------------------------------------------------------------------------

def _qt(name, minor, currency="USD"):
    return QuantifiedThreat(name.lower(), name, Money(minor, currency),
                            Duration.infinite(), ((f"{name}-e", Money(minor, currency)),))


def test_rank_by_impact_case_study_order(fixture_project):
    ranked = rank_by_impact(quantify_project(fixture_project))
    assert [q.threat_name for q in ranked] \
        == ["Ransomware", "DDoS", "Deserialization", "CSRF", "XSS", "XXE"]


def test_rank_singleton():
    only = _qt("Solo", 5)
    assert rank_by_impact([only]) == [only]


def test_rank_tie_break_by_name():
    a, b = _qt("A", 100), _qt("B", 100)
    assert rank_by_impact([b, a]) == [a, b]


def test_rank_rejects_mixed_currency():
    with pytest.raises(MixedCurrency):
        rank_by_impact([_qt("A", 1, "USD"), _qt("B", 1, "CHF")])


def test_emergency_ranking_ascending_mtpd():
    recs = [BiaRecord(f"s{i}", ("e",), mtpd_hours=h)
            for i, h in enumerate((72, 24, 168))]
    assert [r.mtpd_hours for r in rank_by_emergency(recs)] == [24, 72, 168]


def test_emergency_ranking_missing_mtpd_sorts_last():
    with_mtpd = BiaRecord("a", ("e",), mtpd_hours=48)
    without = BiaRecord("b", ("e",))
    assert rank_by_emergency([without, with_mtpd]) == [with_mtpd, without]


def test_emergency_ranking_stable_for_equal_values():
    recs = [BiaRecord(f"s{i}", ("e",), mtpd_hours=24) for i in range(4)]
    assert rank_by_emergency(recs) == recs


# ---------------------------------------------------------------------------
# ROSI
# ---------------------------------------------------------------------------

def test_rosi_ddos_protection_example():
    quantified = [_qt("DDoS", 32400)]
    control = SecurityControl("ddos-prot", "DDoS prevention service",
                              usd("540.00"), 1.0, ("ddos",))
    result = evaluate_rosi(control, quantified)
    assert result.mitigated_impact == usd("324.00")
    assert result.absolute_return == Money(-21600, "USD")
    assert result.cost_effective is False


def test_rosi_zero_rate_returns_minus_cost():
    control = SecurityControl("c", "noop", usd("100.00"), 0.0, ("ddos",))
    result = evaluate_rosi(control, [_qt("DDoS", 32400)])
    assert result.absolute_return == Money(-10000, "USD")
    assert result.mitigated_impact.amount_minor == 0


def test_rosi_free_control_with_positive_impact_is_cost_effective():
    control = SecurityControl("c", "free", usd(0), 0.5, ("ddos",))
    result = evaluate_rosi(control, [_qt("DDoS", 32400)])
    assert result.cost_effective is True
    assert result.absolute_return == usd("162.00")


def test_rosi_rejects_unknown_threat():
    control = SecurityControl("c", "x", usd(1), 1.0, ("nope",))
    with pytest.raises(DanglingReference):
        evaluate_rosi(control, [_qt("DDoS", 1)])


def test_rosi_covers_multiple_threats():
    control = SecurityControl("c", "wide", usd("100.00"), 0.5, ("a", "b"))
    result = evaluate_rosi(control, [_qt("A", 10000), _qt("B", 30000)])
    assert result.mitigated_impact == usd("200.00")
    assert result.absolute_return == usd("100.00")
    assert result.cost_effective is True


# ---------------------------------------------------------------------------
# Currency-scaling ranking invariance
# ---------------------------------------------------------------------------

def test_ranking_invariant_under_uniform_currency_scaling(fixture_project):
    from quanttm.money import convert_currency
    quantified = quantify_project(fixture_project)
    base_order = [q.threat_id for q in rank_by_impact(quantified)]
    for rate in (2, 3, 17):
        scaled = [
            QuantifiedThreat(
                q.threat_id, q.threat_name,
                convert_currency(q.q_value, rate, "EUR"),
                q.duration,
                tuple((e, convert_currency(m, rate, "EUR")) for e, m in q.contributions),
            )
            for q in quantified
        ]
        assert [q.threat_id for q in rank_by_impact(scaled)] == base_order
