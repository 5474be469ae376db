import csv
import io
import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from quanttm.cli import main
from quanttm.project import load_project
from quanttm.service import create_app


@pytest.fixture()
def client(project_path):
    app = create_app(project_path)
    with TestClient(app) as client:
        client.project_path = project_path
        yield client


def _revision(client):
    return client.get("/project").json()["revision"]


# ---------------------------------------------------------------------------
# Reads
# ---------------------------------------------------------------------------

def test_get_project_returns_revision_and_etag(client):
    response = client.get("/project")
    assert response.status_code == 200
    body = response.json()
    assert body["project"]["schema_version"] == 1
    assert response.headers["ETag"] == f'"{body["revision"]}"'


def test_quantify_contains_case_study_entry(client):
    items = client.get("/quantify").json()
    ddos = next(i for i in items if i["threat"] == "DDoS")
    assert ddos["q"] == {"amount_minor": 32400, "currency": "USD"}
    ransomware = next(i for i in items if i["threat"] == "Ransomware")
    assert ransomware["q"]["amount_minor"] == 13018320
    assert ransomware["reference_diverges"] is True
    assert ransomware["reference"] == {"amount_minor": 1354300, "currency": "USD"}


def test_classify_endpoint(client):
    response = client.post("/classify", json={"name": "DDoS"})
    assert response.status_code == 200
    assert response.json() == {"name": "DDoS", "principles": ["Availability"]}


def test_classify_rejects_empty_name(client):
    response = client.post("/classify", json={"name": ""})
    assert response.status_code == 422
    assert response.json()["code"] == "validation_failure"


def test_factors_endpoint_with_letter_codes(client):
    response = client.get("/factors", params={"principles": "A"})
    names = [f["name"] for f in response.json()["factors"]]
    assert names[0] == "Product revenue loss during service disruption"
    assert "Customer breach notification" not in names


def test_catalog_endpoint(client):
    body = client.get("/catalog").json()
    assert body["catalog"]["version"] == 1
    ids = [f["id"] for f in body["catalog"]["factors"]]
    assert "expedited_delivery_fees" in ids  # project extension included
    assert len(body["keyword_table"]["entries"]) >= 20


def test_rank_endpoints(client):
    impact = client.get("/rank", params={"by": "impact"}).json()
    assert [r["threat"] for r in impact][:3] == ["Ransomware", "DDoS", "Deserialization"]
    emergency = client.get("/rank", params={"by": "emergency"}).json()
    assert len(emergency) == 6
    bad = client.get("/rank", params={"by": "nope"})
    assert bad.status_code == 422


def test_rosi_endpoint(client):
    response = client.post("/rosi", json={
        "annual_cost": 540, "mitigation_rate": 1.0, "threat_ids": ["ddos"]})
    body = response.json()
    assert body["absolute_return"] == {"amount_minor": -21600, "currency": "USD"}
    assert body["cost_effective"] is False


def test_rosi_dangling_threat_is_404(client):
    response = client.post("/rosi", json={
        "annual_cost": 1, "mitigation_rate": 1.0, "threat_ids": ["ghost"]})
    assert response.status_code == 404
    assert response.json()["code"] == "dangling_reference"


def test_plots_endpoint(client):
    series = client.get("/plots").json()
    bar = next(s for s in series if s["kind"] == "impact_bar")
    assert bar["values"] == [324, 0, 0, 0, 194.4, 130183.2]


def test_report_csv_endpoint(client):
    response = client.get("/report.csv")
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/csv")
    rows = list(csv.DictReader(io.StringIO(response.text)))
    assert rows[0]["threat"] == "Ransomware"


# ---------------------------------------------------------------------------
# Mutations and optimistic concurrency
# ---------------------------------------------------------------------------

def test_put_project_requires_revision(client):
    doc = client.get("/project").json()["project"]
    response = client.put("/project", json=doc)
    assert response.status_code == 400
    assert response.json()["code"] == "missing_revision"


def test_put_project_with_stale_revision_conflicts(client):
    doc = client.get("/project").json()["project"]
    response = client.put("/project", json=doc, headers={"If-Match": "0" * 64})
    assert response.status_code == 409
    assert response.json()["code"] == "stale_revision"


def test_put_project_succeeds_and_changes_revision(client):
    envelope = client.get("/project").json()
    doc = envelope["project"]
    doc["metadata"]["name"] = "renamed"
    response = client.put("/project", json=doc,
                          headers={"If-Match": envelope["revision"]})
    assert response.status_code == 200
    new_revision = response.json()["revision"]
    assert new_revision != envelope["revision"]
    assert client.get("/project").json()["project"]["metadata"]["name"] == "renamed"


def test_put_project_validates_document(client):
    envelope = client.get("/project").json()
    doc = envelope["project"]
    doc["scenarios"].append({"threat_id": "ghost", "effects": [
        {"id": "gx", "description": "x", "degree": 1,
         "duration_override_hours": None, "principles": []}]})
    response = client.put("/project", json=doc,
                          headers={"If-Match": envelope["revision"]})
    assert response.status_code == 422
    body = response.json()
    assert body["code"] == "validation_failure"
    assert "scenarios" in body["path"]


def test_put_estimates_round_trip(client):
    revision = _revision(client)
    payload = {
        "estimated_effects": ["ddos-e1"],
        "one_time": [{"effect_id": "ddos-e1", "factor_id": "technical_investigation",
                      "amount": {"amount_minor": 162000, "currency": "USD"}}],
        "persistent": [{"effect_id": "ddos-e1", "factor_id": "product_revenue_loss",
                        "daily_loss": {"amount_minor": 10000, "currency": "USD"},
                        "stages": [{"recovery_level": 0, "days": 2},
                                   {"recovery_level": 0.5, "days": 2}]}],
        "mtpd_hours": 24,
        "currency": "USD",
    }
    response = client.put("/scenarios/ddos/estimates", json=payload,
                          headers={"If-Match": revision})
    assert response.status_code == 200, response.text
    # persisted project must stay loadable and reflect the change
    project = load_project(client.project_path.read_bytes())
    record = project.record_for("ddos")
    assert record.mtpd_hours == 24
    assert len(record.persistent) == 1
    # quantify sees the persistent loss truncated at 48h
    items = client.get("/quantify").json()
    ddos = next(i for i in items if i["threat"] == "DDoS")
    # one-time 1620 + truncated persistent (2 full outage days of 100) = 1820; q = 0.2 * 1820
    assert ddos["q"]["amount_minor"] == 36400


def test_put_estimates_unknown_scenario_is_404(client):
    response = client.put("/scenarios/ghost/estimates", json={"estimated_effects": []},
                          headers={"If-Match": _revision(client)})
    assert response.status_code == 404


def test_put_estimates_invalid_payload_gives_entity_path(client):
    payload = {
        "estimated_effects": ["ddos-e1"],
        "persistent": [{"effect_id": "ddos-e1", "factor_id": "product_revenue_loss",
                        "daily_loss": {"amount_minor": 100, "currency": "USD"},
                        "stages": [{"recovery_level": 1.7, "days": 1}]}],
    }
    response = client.put("/scenarios/ddos/estimates", json=payload,
                          headers={"If-Match": _revision(client)})
    assert response.status_code == 422
    body = response.json()
    assert "stages[0]" in body["path"]


def test_put_estimates_reports_recovery_lint_warnings(client):
    payload = {
        "estimated_effects": ["ddos-e1"],
        "persistent": [{"effect_id": "ddos-e1", "factor_id": "product_revenue_loss",
                        "daily_loss": {"amount_minor": 100, "currency": "USD"},
                        "stages": [{"recovery_level": 0.8, "days": 1},
                                   {"recovery_level": 0.2, "days": 1}]}],
    }
    response = client.put("/scenarios/ddos/estimates", json=payload,
                          headers={"If-Match": _revision(client)})
    assert response.status_code == 200
    assert any("decreases" in w for w in response.json()["warnings"])


def test_concurrent_mutations_serialize_one_winner(client):
    import threading

    revision = _revision(client)
    payload = {
        "estimated_effects": ["ddos-e1"],
        "one_time": [{"effect_id": "ddos-e1", "factor_id": "technical_investigation",
                      "amount": {"amount_minor": 111111, "currency": "USD"}}],
    }
    statuses = []

    def put():
        response = client.put("/scenarios/ddos/estimates", json=payload,
                              headers={"If-Match": revision})
        statuses.append(response.status_code)

    threads = [threading.Thread(target=put) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    # both raced on the same revision: exactly one writer wins
    assert sorted(statuses) == [200, 409]
    project = load_project(client.project_path.read_bytes())
    assert project.record_for("ddos").one_time[0].amount.amount_minor == 111111


def test_malformed_project_document_is_400(client):
    response = client.put("/project", json={"schema_version": 42},
                          headers={"If-Match": _revision(client)})
    assert response.status_code == 400
    assert response.json()["code"] == "unknown_schema_version"


# ---------------------------------------------------------------------------
# CLI / API differential
# ---------------------------------------------------------------------------

def test_cli_and_api_quantify_identically(client, project_path):
    api_items = client.get("/quantify").json()
    runner = CliRunner()
    result = runner.invoke(main, ["quantify", "--project", str(project_path), "--json"])
    assert result.exit_code == 0
    cli_items = json.loads(result.stdout)
    assert cli_items == api_items


def test_cli_and_api_differential_without_reference_figures(tmp_path, project_path):
    # strip the recorded references so optional fields are absent on both sides
    doc = json.loads(project_path.read_text())
    doc["metadata"]["reference_q"] = {}
    stripped = tmp_path / "no-refs.json"
    stripped.write_text(json.dumps(doc))
    with TestClient(create_app(stripped)) as client:
        api_items = client.get("/quantify").json()
    result = CliRunner().invoke(main, ["quantify", "--project", str(stripped), "--json"])
    assert result.exit_code == 0
    assert json.loads(result.stdout) == api_items
    assert all("reference" not in item for item in api_items)


def test_cli_and_api_rosi_identically(client, project_path):
    api = client.post("/rosi", json={
        "annual_cost": 540, "mitigation_rate": 1.0, "threat_ids": ["ddos"],
        "name": "ad-hoc control"}).json()
    runner = CliRunner()
    result = runner.invoke(main, ["rosi", "--project", str(project_path),
                                  "--cost", "540", "--rate", "1.0",
                                  "--threat", "ddos", "--json"])
    cli = json.loads(result.stdout)
    assert cli == api
