# tests/test_api.py - Endpoints HTTP sobre los mismos servicios que el CLI

import pytest
from fastapi.testclient import TestClient

from main import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy"}


def test_root(client):
    body = client.get("/").json()
    assert body["message"] == "derivhom"
    assert body["documentation"] == "/docs"


def test_check_workspace(client, example_source):
    response = client.post("/api/v1/workspaces/check", json={"source": example_source})
    assert response.status_code == 200
    body = response.json()
    assert body["models"] == ["X", "Y"]
    assert body["morphisms"] == ["phi"]
    assert body["tasks"] == ["g_sequence"]
    assert "  d x11 = x4^3;" in body["formatted"]


def test_check_reports_parse_errors(client):
    response = client.post("/api/v1/workspaces/check", json={"source": "model X {\n  gen x4 4;\n}\n"})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["kind"] == "parse"
    assert detail["details"] == ["2:10: se esperaba ':', se encontró '4'"]


def test_check_reports_semantic_errors(client):
    source = "model Z {\n  gen y3 : 3;\n  gen z5 : 5;\n  d z5 = y3^2;\n}\n"
    response = client.post("/api/v1/workspaces/check", json={"source": source})
    assert response.status_code == 422
    detail = response.json()["detail"]
    assert detail["kind"] == "semantic"
    assert detail["details"][0].startswith("4:10: odd square is zero")


def test_empty_source_is_rejected(client):
    assert client.post("/api/v1/workspaces/check", json={"source": ""}).status_code == 422


def test_run_json(client, example_source):
    response = client.post(
        "/api/v1/workspaces/run", json={"source": example_source, "max_degree": 12, "format": "json"}
    )
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("application/json")
    table = response.json()["tasks"][0]["tables"]["11"]
    assert table["dims"]["G_11(X)"] == 1
    assert table["witnesses"] == ["G_11(X): x11*"]


def test_run_text(client, example_source):
    response = client.post(
        "/api/v1/workspaces/run",
        json={"source": example_source, "max_degree": 12, "format": "text", "task": "g_sequence"},
    )
    assert response.status_code == 200
    assert response.headers["content-type"].startswith("text/plain")
    assert "    G_11(X) dim 1, non-exact, witness x11*" in response.text


def test_run_task_errors(client, example_source):
    response = client.post("/api/v1/workspaces/run", json={"source": example_source, "task": "nope"})
    assert response.status_code == 400
    assert response.json()["detail"]["kind"] == "TaskParameterError"
    response = client.post("/api/v1/workspaces/run", json={"source": example_source, "max_degree": 1})
    assert response.status_code == 422
    response = client.post("/api/v1/workspaces/run", json={"source": example_source, "task": "bad name"})
    assert response.status_code == 422


def test_library_catalog(client):
    body = client.get("/api/v1/library").json()
    assert set(body["families"]) == {"S", "CP", "HP", "K"}
    assert "S3xS5" in body["examples"]


def test_library_model(client):
    response = client.get("/api/v1/library/HP2")
    assert response.status_code == 200
    body = response.json()
    assert body["name"] == "HP2"
    assert body["minimal"] is True
    assert body["generators"] == [
        {"name": "x4", "degree": 4, "differential": "0"},
        {"name": "y11", "degree": 11, "differential": "x4^3"},
    ]


def test_library_unknown_model(client):
    assert client.get("/api/v1/library/T2").status_code == 404
    assert client.get("/api/v1/library/S0").status_code == 404
