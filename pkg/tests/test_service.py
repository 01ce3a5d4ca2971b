"""The HTTP service: endpoints, status codes, parity with the library."""

import json

import pytest
from fastapi.testclient import TestClient

from minpoints import format_json
from minpoints.service import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_word_endpoint(client):
    resp = client.post("/word", json={"word_id": "fib(1,2)", "n": 8})
    assert resp.status_code == 200
    body = resp.json()
    assert body["letters"] == [1, 2, 1, 1, 2, 1, 2, 1]
    assert body["word_id"] == "fib(1,2)"


def test_word_validation(client):
    assert client.post("/word", json={"word_id": "fib(1,2)", "n": 0}).status_code == 422
    assert client.post("/word", json={"word_id": "nope(1)", "n": 3}).status_code == 400


def test_minimal_points_endpoint(client, fib12_points_1e4):
    resp = client.post("/minimal-points", json={"xi": "word:fib(1,2)", "x_max": 10000})
    assert resp.status_code == 200
    body = resp.json()
    want = json.loads(format_json(fib12_points_1e4))["points"]
    assert body["points"] == want
    assert body["summary"]["points"] == 5
    assert body["summary"]["final_X"] == 299


def test_minimal_points_defaults(client):
    resp = client.post("/minimal-points", json={"xi": "cf:[0;2]", "x_max": 50})
    assert resp.status_code == 200
    body = resp.json()
    assert [p["X_i"] for p in body["points"]] == [1, 4]
    assert body["summary"]["zero_delta"] is True


def test_minimal_points_parse_error_400(client):
    resp = client.post("/minimal-points", json={"xi": "junk:[1;2]", "x_max": 50})
    assert resp.status_code == 400
    assert "detail" in resp.json()


def test_precision_exhausted_409(client):
    resp = client.post(
        "/minimal-points", json={"xi": "word:fib(1,2)", "x_max": 10000, "max_depth": 4}
    )
    assert resp.status_code == 409
    assert "54" in resp.json()["detail"]


def test_verify_endpoint(client):
    resp = client.post("/verify", json={"xi": "word:fib(1,2)", "x_max": 10000})
    assert resp.status_code == 200
    body = resp.json()
    assert set(body["lemmas"]) == {"dirichlet", "W", "X", "f", "main"}
    assert body["lemmas"]["W"]["verdict"] == "holds-on-horizon"
    assert body["run"]["x_max"] == 10000
    assert body["exponent"]["tail_argmin"] == 4


def test_verify_custom_lambda_theta(client):
    resp = client.post(
        "/verify",
        json={"xi": "word:fib(1,2)", "x_max": 10000, "lambda": "3/5", "theta": "41/20"},
    )
    assert resp.status_code == 200
    assert resp.json()["run"]["theta"] == "41/20"
    resp = client.post(
        "/verify", json={"xi": "word:fib(1,2)", "x_max": 100, "lambda": "1/2"}
    )
    assert resp.status_code == 400


def test_verify_replay_points(client, fib12_points_1e4):
    rows = json.loads(format_json(fib12_points_1e4))["points"]
    resp = client.post(
        "/verify",
        json={"xi": "word:fib(1,2)", "x_max": 10000, "replay_points": rows},
    )
    assert resp.status_code == 200
    fresh = client.post("/verify", json={"xi": "word:fib(1,2)", "x_max": 10000})
    assert resp.json() == fresh.json()


def test_verify_replay_violation_reported(client):
    rows = [
        {"index": 1, "X_i": 1, "x0": 1, "x1": 1, "x2": 2, "delta_lo": "1/3", "delta_hi": "1/3"},
        {"index": 2, "X_i": 2, "x0": 2, "x1": 2, "x2": 4, "delta_lo": "1/5", "delta_hi": "1/5"},
    ]
    resp = client.post(
        "/verify", json={"xi": "word:fib(1,2)", "x_max": 2, "replay_points": rows}
    )
    assert resp.status_code == 200
    assert resp.json()["lemmas"]["W"]["verdict"] == "violated"


def test_bounds_evertse_endpoint(client):
    resp = client.post("/bounds/evertse", json={"delta": "1/10", "D": 6})
    assert resp.status_code == 200
    body = resp.json()
    assert abs(body["evertse_log2"] - 611.63811063452744) < 1e-9
    assert abs(body["evertse_ln"] - body["evertse_log2"] * 0.6931471805599453) < 1e-9
    assert client.post("/bounds/evertse", json={"delta": "2", "D": 6}).status_code == 400


def test_bounds_measure_endpoint(client):
    resp = client.post("/bounds/measure", json={"d": 3, "H": 2})
    assert resp.status_code == 200
    body = resp.json()
    assert abs(body["w"] - 1.1088485107160357) < 1e-12
    assert abs(body["log_bound"] - (-0.7685952188709145)) < 1e-12
    assert client.post("/bounds/measure", json={"d": 2, "H": 2}).status_code == 400


def test_request_validation_422(client):
    assert client.post("/minimal-points", json={"x_max": 10}).status_code == 422
    assert client.post("/minimal-points", json={"xi": "cf:[0;2]", "x_max": 0}).status_code == 422
    assert client.post("/bounds/measure", json={"d": 3}).status_code == 422
