import pytest
from fastapi.testclient import TestClient

from server.app import app

FLAGS = {"prec": 8, "window": "-16:16"}


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as c:
        yield c


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "healthy", "version": "1.0"}


def test_info_lists_directives(client):
    body = client.get("/info").json()
    assert "classify" in body["directives"]
    assert "cartier" in body["selfcheck_properties"]


def test_classify(client):
    response = client.post("/classify", json={"expression": "1 + l^3*T^-1", "p": 3, **FLAGS})
    assert response.status_code == 200
    body = response.json()
    assert body["report"]["kind"] == "etale"
    assert body["report"]["m"] == 1
    assert body["context"]["prec"] == 8


def test_classify_reports_library_errors(client):
    response = client.post("/classify", json={"expression": "1 + pi*T^-1", **FLAGS})
    assert response.status_code == 400
    assert response.json()["detail"]["kind"] == "ExtensionRequired"


def test_run(client):
    document = "p: 3\nA = mu_p(t)\nB = mu_p(t^2)\nconfig C = A, B\nnode x: A@0 B@0\nkummerian C\n"
    response = client.post("/run", json={"document": document, **FLAGS})
    assert response.status_code == 200
    body = response.json()
    assert body["exit_code"] == 0
    assert body["records"][0]["result"]["kummerian"] is True


@pytest.mark.parametrize(
    "payload",
    [
        {},
        {"document": "mode: mixed\nu = 1 + pi^3 T\n"},
        {"document": "classify t\n"},
        {"document": "p: 3\n", "window": "oops"},
        {"document": "p: 3\n", "prec": 1},
    ],
)
def test_run_rejects_bad_input(client, payload):
    assert client.post("/run", json=payload).status_code == 400


def test_parse_errors_carry_positions(client):
    response = client.post("/run", json={"document": "mode: mixed\nu = 1 + pi^3 T\n"})
    detail = response.json()["detail"]
    assert (detail["kind"], detail["line"], detail["column"]) == ("ParseError", 2, 14)
