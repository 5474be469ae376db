import random

import pytest

from quanttm.errors import (
    DanglingReference,
    DuplicateId,
    InvalidValue,
    ProbabilityOutOfRange,
)
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
    build_threat_model,
    translate_to_scenarios,
    validate_model,
)


def case_study_inputs():
    threats = [
        ThreatEvent("ddos", "DDoS"),
        ThreatEvent("csrf", "CSRF"),
        ThreatEvent("xss", "XSS"),
        ThreatEvent("xxe", "XXE"),
        ThreatEvent("deserialization", "Deserialization"),
        ThreatEvent("ransomware", "Ransomware"),
    ]
    assets = [Asset("webshop", "E-commerce web shop", AssetKind.FUNCTIONAL)]
    links = [
        ThreatAssetLink("ddos", "webshop", 0.2, 1.0, Duration(48)),
        ThreatAssetLink("csrf", "webshop", 0.4, 0.1, Duration.infinite()),
        ThreatAssetLink("xss", "webshop", 0.4, 0.5, Duration.infinite()),
        ThreatAssetLink("xxe", "webshop", 0.4, 0.1, Duration.infinite()),
        ThreatAssetLink("deserialization", "webshop", 0.2, 0.2, Duration(72)),
        ThreatAssetLink("ransomware", "webshop", 0.6, 0.2, Duration(72)),
    ]
    return threats, assets, links


def test_case_study_model_builds_with_six_links():
    threats, assets, links = case_study_inputs()
    model = build_threat_model(threats, assets, links)
    assert len(model.links) == 6
    ddos = model.links_for_threat("ddos")[0]
    assert (ddos.p_initiation, ddos.p_success, ddos.duration.hours) == (0.2, 1.0, 48.0)


def test_empty_model():
    model = build_threat_model([], [], [])
    assert model.threats == () and model.assets == () and model.links == ()


def test_probability_out_of_range():
    with pytest.raises(ProbabilityOutOfRange):
        ThreatAssetLink("t", "a", 1.3, 0.5, Duration(1))
    with pytest.raises(ProbabilityOutOfRange):
        ThreatAssetLink("t", "a", 0.5, -0.01, Duration(1))


def test_duration_invariants():
    assert Duration(0).hours == 0
    assert Duration.infinite().is_infinite
    assert str(Duration.infinite()) == "inf"
    assert str(Duration(48)) == "48h"
    with pytest.raises(InvalidValue):
        Duration(-1)


def test_build_rejects_duplicate_ids():
    threats = [ThreatEvent("t1", "A"), ThreatEvent("t1", "B")]
    with pytest.raises(DuplicateId):
        build_threat_model(threats, [], [])


def test_build_rejects_dangling_link():
    with pytest.raises(DanglingReference):
        build_threat_model(
            [ThreatEvent("t1", "A")], [],
            [ThreatAssetLink("t1", "missing", 0.1, 0.1, Duration(1))])


def test_build_rejects_duplicate_link_pair():
    threats = [ThreatEvent("t1", "A")]
    assets = [Asset("a1", "asset", AssetKind.DATA)]
    links = [
        ThreatAssetLink("t1", "a1", 0.1, 0.1, Duration(1)),
        ThreatAssetLink("t1", "a1", 0.2, 0.2, Duration(2)),
    ]
    with pytest.raises(DuplicateId):
        build_threat_model(threats, assets, links)


def test_validate_model_reports_violations_as_data():
    model = ThreatModel(
        (ThreatEvent("t1", "A"), ThreatEvent("t1", "B")), (), ())
    violations = validate_model(model)
    assert len(violations) == 1
    assert violations[0].rule == "duplicate_id"
    assert "t1" in violations[0].message


def test_validation_sound_on_accepted_models():
    threats, assets, links = case_study_inputs()
    model = build_threat_model(threats, assets, links)
    assert validate_model(model) == []


def test_construction_deterministic():
    a = build_threat_model(*case_study_inputs())
    b = build_threat_model(*case_study_inputs())
    assert a == b


def test_effect_degree_bounds():
    with pytest.raises(InvalidValue):
        ThreatEffect("e1", "something", degree=0)
    with pytest.raises(InvalidValue):
        ThreatEffect("e1", "something", degree=1.2)
    eff = ThreatEffect("e1", "80% of external sales stop", degree=0.8)
    assert eff.degree == 0.8


def test_effect_requires_description():
    with pytest.raises(InvalidValue):
        ThreatEffect("e1", "   ")


def test_scenario_requires_effects():
    with pytest.raises(InvalidValue):
        ThreatScenario("t1", ())


def test_translate_case_study_shapes():
    model = build_threat_model(*case_study_inputs())
    scenarios = translate_to_scenarios(model, [
        ("ransomware", [
            ThreatEffect("r1", "Employees cannot process existing orders"),
            ThreatEffect("r2", "Customers cannot order via the shop"),
            ThreatEffect("r3", "Existing orders are publicly accessible"),
        ]),
        ("ddos", [
            ThreatEffect("d1", "Customers cannot order via the shop", degree=1.0,
                         duration_override=Duration(48)),
        ]),
    ])
    assert [s.threat_id for s in scenarios] == ["ransomware", "ddos"]
    assert len(scenarios[0].effects) == 3
    assert [e.id for e in scenarios[0].effects] == ["r1", "r2", "r3"]
    assert len(scenarios[1].effects) == 1
    # unmapped threats are absent
    assert all(s.threat_id not in ("csrf", "xss", "xxe") for s in scenarios)


def test_translate_rejects_unknown_threat():
    model = build_threat_model(*case_study_inputs())
    with pytest.raises(DanglingReference):
        translate_to_scenarios(model, [("nope", [ThreatEffect("e", "x")])])


def test_translate_cardinality_matches_mapping():
    model = build_threat_model(*case_study_inputs())
    rng = random.Random(7)
    threat_ids = [t.id for t in model.threats]
    for _ in range(25):
        chosen = rng.sample(threat_ids, rng.randint(0, len(threat_ids)))
        mapping = [
            (tid, [ThreatEffect(f"{tid}-e{i}", "effect") for i in range(rng.randint(1, 4))])
            for tid in chosen
        ]
        scenarios = translate_to_scenarios(model, mapping)
        assert len(scenarios) == len(mapping)
        assert sum(len(s.effects) for s in scenarios) == sum(len(e) for _, e in mapping)


def test_principles_normalized_on_effect():
    eff = ThreatEffect("e1", "leak", principles={"Availability", SecurityPrinciple.CONFIDENTIALITY})
    assert eff.principles == frozenset({SecurityPrinciple.AVAILABILITY,
                                        SecurityPrinciple.CONFIDENTIALITY})
