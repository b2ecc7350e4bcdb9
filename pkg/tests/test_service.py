"""HTTP service endpoints via the in-process test client."""

import pytest
from fastapi.testclient import TestClient

from catshor.schemas import validate
from catshor.service.app import app

client = TestClient(app)

ESTIMATE_BODY = {
    "n": 16,
    "w_e": 11,
    "w_m": 4,
    "alpha_sq": 14,
    "d": 9,
    "factory_i": 5,
}


def test_health():
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json() == {"status": "ok"}


def test_estimate_endpoint():
    resp = client.post("/estimate", json=ESTIMATE_BODY)
    assert resp.status_code == 200
    doc = resp.json()
    validate(doc, "resource_estimate")
    assert doc["physical_qubits"] == 6070
    assert doc["params"]["n_e"] == 32


def test_estimate_custom_error_config():
    body = dict(ESTIMATE_BODY, error={"kappa_ratio": 2e-5, "cycle_ns": 1000})
    resp = client.post("/estimate", json=body)
    assert resp.status_code == 200
    doc = resp.json()
    assert doc["error_params"]["kappa_ratio"] == 2e-5
    assert doc["error_params"]["cycle_time"] == pytest.approx(1e-6)
    # doubling the cycle time doubles the wall-clock runtime
    base = client.post("/estimate", json=ESTIMATE_BODY).json()
    assert doc["t_run"] == pytest.approx(2 * base["t_run"])


def test_estimate_infeasible_binding():
    body = dict(ESTIMATE_BODY, error={"kappa_ratio": 0.05})
    resp = client.post("/estimate", json=body)
    assert resp.status_code == 422
    detail = resp.json()["detail"]
    assert detail["error"] == "infeasible"
    assert detail["binding"] == "error budget"


def test_estimate_rejects_extra_keys():
    resp = client.post("/estimate", json=dict(ESTIMATE_BODY, banana=1))
    assert resp.status_code == 422


def test_estimate_rejects_bad_values():
    resp = client.post("/estimate", json=dict(ESTIMATE_BODY, n=1))
    assert resp.status_code == 422
    # even code distance passes pydantic but fails the core validator
    resp = client.post("/estimate", json=dict(ESTIMATE_BODY, d=4))
    assert resp.status_code == 422


def test_optimize_endpoint():
    body = {
        "n": 8,
        "grid": {
            "w_e": [3, 5],
            "w_m": [1, 2],
            "alpha_sq": [8, 12],
            "d": [3, 5],
            "factory_i": [0, 5],
        },
    }
    resp = client.post("/optimize", json=body)
    assert resp.status_code == 200
    doc = resp.json()
    validate(doc, "optimization_result")
    assert doc["n_feasible"] >= 1
    # workers do not change the result
    again = client.post("/optimize", json=dict(body, workers=3))
    assert again.json() == doc


def test_optimize_infeasible_grid():
    body = {"n": 8, "grid": {"alpha_sq": [4], "d": [31]}}
    resp = client.post("/optimize", json=body)
    if resp.status_code == 422:
        assert resp.json()["detail"]["error"] == "infeasible"
    else:
        validate(resp.json(), "optimization_result")


def test_table_endpoint():
    resp = client.post("/table", json={"n_list": [8, 16]})
    assert resp.status_code == 200
    doc = resp.json()
    validate(doc, "results_table")
    assert [r["n"] for r in doc["rows"]] == [8, 16]
    assert [r["logical_qubits"] for r in doc["rows"]] == [85, 159]


def test_table_empty():
    resp = client.post("/table", json={})
    assert resp.status_code == 200
    assert resp.json()["rows"] == []


def test_qec_sample_endpoint_deterministic():
    body = {"d": 3, "alpha_sq": 6, "kappa_ratio": 1e-3, "trials": 200, "seed": 9}
    a = client.post("/qec-sample", json=body)
    b = client.post("/qec-sample", json=body)
    assert a.status_code == 200
    assert a.json() == b.json()
    validate(a.json(), "qec_sample")


def test_qec_sample_rejects_zero_trials():
    resp = client.post(
        "/qec-sample", json={"d": 3, "alpha_sq": 6, "trials": 0}
    )
    assert resp.status_code == 422


def test_verify_endpoint():
    resp = client.post("/verify", json={"suite": "modular", "prime": 7})
    assert resp.status_code == 200
    doc = resp.json()
    validate(doc, "verify_report")
    assert doc["ok"] is True


def test_verify_unknown_suite():
    resp = client.post("/verify", json={"suite": "nonsense"})
    assert resp.status_code == 422
