#!/usr/bin/env python3
"""Generate the frontend test project: a hypothetical US technology
manufacturer with three threats (malware on the central product server, an
insider modifying customer data, a botnet stopping the production line).

Run from the repository root:  python3 scripts/make_focus_group_project.py
"""

from pathlib import Path

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
from quanttm.project import ProjectFile, ProjectMeta, save_project

A = SecurityPrinciple.AVAILABILITY
I = SecurityPrinciple.INTEGRITY

OUT = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "data" / "focus-group.json"


def build() -> ProjectFile:
    threats = [
        ThreatEvent("malware", "Malware",
                    "Malware affecting the central server of the core product"),
        ThreatEvent("insider", "Insider threat", "An insider modifying customer data"),
        ThreatEvent("botnet", "Botnet", "A botnet shutting down the production line"),
    ]
    assets = [
        Asset("server", "Central product server", AssetKind.FUNCTIONAL,
              "Hosts the core product used by customers"),
        Asset("customer-data", "Customer data", AssetKind.DATA,
              "Customer master data and order history"),
        Asset("production", "Production line", AssetKind.FUNCTIONAL,
              "Manufacturing line for the physical product"),
    ]
    links = [
        ThreatAssetLink("malware", "server", 0.5, 0.4, Duration(72)),
        ThreatAssetLink("insider", "customer-data", 0.3, 0.5, Duration.infinite()),
        ThreatAssetLink("botnet", "production", 0.25, 0.6, Duration(48)),
    ]
    model = build_threat_model(threats, assets, links)
    scenarios = translate_to_scenarios(model, [
        ("malware", [ThreatEffect("malware-e1",
                                  "Customers cannot use the core product", 1.0,
                                  principles={A})]),
        ("insider", [ThreatEffect("insider-e1",
                                  "Customer data is silently modified", 1.0,
                                  principles={I})]),
        ("botnet", [ThreatEffect("botnet-e1",
                                 "The production line stands still", 1.0,
                                 principles={A})]),
    ])
    return ProjectFile(
        meta=ProjectMeta(name="US technology manufacturer (workshop scenario)",
                         currency="USD", created="2024-05-01T00:00:00Z"),
        model=model,
        scenarios=tuple(scenarios),
    )


if __name__ == "__main__":
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_bytes(save_project(build()))
    print(f"wrote {OUT}")
