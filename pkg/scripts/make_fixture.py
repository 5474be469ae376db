#!/usr/bin/env python3
"""Regenerate the bundled Swiss-SME case-study fixture in canonical form.

Run from the repository root:  python3 scripts/make_fixture.py
"""

from pathlib import Path

from quanttm.bia import BiaRecord, OneTimeImpact
from quanttm.catalog import ImpactFactor, LossKind, Tangibility
from quanttm.model import (
    Asset,
    AssetKind,
    Duration,
    SecurityPrinciple,
    ThreatAssetLink,
    ThreatEffect,
    ThreatEvent,
    build_threat_model,
    translate_to_scenarios,
)
from quanttm.money import Money
from quanttm.project import BaselineData, ProjectFile, ProjectMeta, save_project
from quanttm.quantify import SecurityControl
from quanttm.baselines import ScoreRange

C = SecurityPrinciple.CONFIDENTIALITY
I = SecurityPrinciple.INTEGRITY
A = SecurityPrinciple.AVAILABILITY

OUT = Path(__file__).resolve().parent.parent / "src" / "quanttm" / "fixtures" / "swiss-sme.json"


def usd(amount) -> Money:
    return Money.from_major(amount, "USD")


def build() -> ProjectFile:
    threats = [
        ThreatEvent("ddos", "DDoS", "Distributed denial-of-service attack on the web shop"),
        ThreatEvent("csrf", "CSRF", "Cross-site request forgery against shop users"),
        ThreatEvent("xss", "XSS", "Cross-site scripting in the shop frontend"),
        ThreatEvent("xxe", "XXE", "XML external entity processing in the shop backend"),
        ThreatEvent("deserialization", "Deserialization",
                    "Insecure deserialization in the shop backend"),
        ThreatEvent("ransomware", "Ransomware",
                    "Ransomware with data exfiltration and extortion"),
    ]
    assets = [
        Asset("webshop", "E-commerce web shop", AssetKind.FUNCTIONAL,
              "Web-based ordering service replacing phone and e-mail orders"),
        Asset("orders", "Order and customer data", AssetKind.DATA,
              "Customer orders, purchasing conditions, and contact data"),
    ]
    links = [
        ThreatAssetLink("ddos", "webshop", 0.2, 1.0, Duration(48)),
        ThreatAssetLink("csrf", "webshop", 0.4, 0.1, Duration.infinite()),
        ThreatAssetLink("xss", "webshop", 0.4, 0.5, Duration.infinite()),
        ThreatAssetLink("xxe", "webshop", 0.4, 0.1, Duration.infinite()),
        ThreatAssetLink("deserialization", "webshop", 0.2, 0.2, Duration(72)),
        ThreatAssetLink("ransomware", "orders", 0.6, 0.2, Duration(72)),
    ]
    model = build_threat_model(threats, assets, links)

    cannot_order = "Customers cannot order via the shop, only via phone"
    malicious_orders = "Malicious orders to existing or new customers"
    cannot_process = "Employees cannot process existing orders"
    scenarios = translate_to_scenarios(model, [
        ("ddos", [ThreatEffect("ddos-e1", cannot_order, 1.0, principles={A})]),
        ("csrf", [ThreatEffect("csrf-e1", malicious_orders, 1.0, principles={I})]),
        ("xss", [ThreatEffect("xss-e1", malicious_orders, 1.0, principles={I})]),
        ("xxe", [ThreatEffect("xxe-e1", malicious_orders, 1.0, principles={I})]),
        ("deserialization", [
            ThreatEffect("deser-e1", cannot_process, 1.0, principles={A}),
            ThreatEffect("deser-e2", cannot_order, 1.0, principles={A}),
        ]),
        ("ransomware", [
            ThreatEffect("ransom-e1", cannot_process, 1.0, principles={A}),
            ThreatEffect("ransom-e2", cannot_order, 1.0, principles={A}),
            ThreatEffect("ransom-e3",
                         "Existing orders are publicly accessible to customers and competitors",
                         1.0, principles={C}),
        ]),
    ])

    extensions = (
        ImpactFactor("expedited_delivery_fees", "Expedited delivery fees",
                     Tangibility.TANGIBLE, frozenset({A}), LossKind.ONE_TIME),
    )

    records = (
        BiaRecord("ddos", ("ddos-e1",),
                  one_time=(OneTimeImpact("ddos-e1", "technical_investigation", usd("1620.00")),),
                  currency="USD"),
        BiaRecord("csrf", ("csrf-e1",), currency="USD"),
        BiaRecord("xss", ("xss-e1",), currency="USD"),
        BiaRecord("xxe", ("xxe-e1",), currency="USD"),
        BiaRecord("deserialization", ("deser-e1", "deser-e2"),
                  one_time=(
                      OneTimeImpact("deser-e1", "expedited_delivery_fees", usd("3240.00")),
                      OneTimeImpact("deser-e2", "technical_investigation", usd("1620.00")),
                  ),
                  currency="USD"),
        BiaRecord("ransomware", ("ransom-e1", "ransom-e2", "ransom-e3"),
                  one_time=(
                      OneTimeImpact("ransom-e1", "expedited_delivery_fees", usd("3240.00")),
                      OneTimeImpact("ransom-e2", "technical_investigation", usd("1620.00")),
                      OneTimeImpact("ransom-e3", "lost_future_contracts", usd("1080000.00")),
                  ),
                  currency="USD"),
    )

    controls = (
        SecurityControl("ddos-protection", "DDoS prevention service",
                        usd("540.00"), 1.0, ("ddos",)),
    )

    baselines = BaselineData(dread=(
        ("ddos", (ScoreRange.of(10), ScoreRange.of(10), ScoreRange.of(10),
                  ScoreRange.of(10), ScoreRange.of(8))),
        ("csrf", (ScoreRange.of(8), ScoreRange.of((0, 10)), ScoreRange.of(5),
                  ScoreRange.of(6), ScoreRange.of((0, 5)))),
        ("xss", (ScoreRange.of(8), ScoreRange.of((0, 7.5)), ScoreRange.of(5),
                 ScoreRange.of(6), ScoreRange.of((0, 5)))),
        ("xxe", (ScoreRange.of(5), ScoreRange.of(5), ScoreRange.of(5),
                 ScoreRange.of((0, 10)), ScoreRange.of(5))),
        ("deserialization", (ScoreRange.of(5), ScoreRange.of(5), ScoreRange.of(5),
                             ScoreRange.of((0, 10)), ScoreRange.of((0, 10)))),
        ("ransomware", (ScoreRange.of(10), ScoreRange.of(5), ScoreRange.of(2.5),
                        ScoreRange.of(10), ScoreRange.of((0, 10)))),
    ))

    meta = ProjectMeta(
        name="Swiss SME e-commerce case study",
        currency="USD",
        conversion_rates=(("CHF", 1.08),),
        created="2023-03-26T00:00:00Z",
        reference_q=(
            ("csrf", usd(0)),
            ("ddos", usd(324)),
            ("deserialization", usd(194)),
            ("ransomware", usd(13543)),
            ("xss", usd(0)),
            ("xxe", usd(0)),
        ),
        notes=(
            "Losses were collected in CHF and converted to USD at 1.08 USD per CHF.",
            "reference_q carries the yearly figures recorded with the original dataset. "
            "The ransomware reference (13,543 USD) cannot be derived from the stored "
            "impacts; quantification of the stored inputs yields 130,183.20 USD per year.",
        ),
    )

    classifications = (
        ("csrf", frozenset({I})),
        ("ddos", frozenset({A})),
        ("deserialization", frozenset({I, A})),
        ("ransomware", frozenset({A, C})),
        ("xss", frozenset({C, I})),
        ("xxe", frozenset({C, I})),
    )

    return ProjectFile(
        meta=meta,
        model=model,
        scenarios=tuple(scenarios),
        classifications=classifications,
        catalog_extensions=extensions,
        bia_records=records,
        controls=controls,
        baselines=baselines,
    )


if __name__ == "__main__":
    project = build()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_bytes(save_project(project))
    print(f"wrote {OUT}")
