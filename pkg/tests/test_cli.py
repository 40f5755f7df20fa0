import json

from click.testing import CliRunner

from backend.main import cli

DOCUMENT = """mode: mixed
p: 3
u = 1+l^3*T^(-1)
classify u
sp-check T, T
"""


def write(tmp_path, text, name="doc.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_run_json(tmp_path):
    result = CliRunner().invoke(cli, ["run", write(tmp_path, DOCUMENT), "--json", "--prec", "8", "--window", "-16:16"])
    assert result.exit_code == 0
    records = [json.loads(line) for line in result.stdout.splitlines()]
    assert [r["command"] for r in records] == ["classify", "sp-check"]
    assert records[0]["result"]["kind"] == "etale"


def test_run_table(tmp_path):
    result = CliRunner().invoke(cli, ["run", write(tmp_path, DOCUMENT), "--prec", "8", "--window", "-16:16"])
    assert result.exit_code == 0
    assert "sp-check" in result.stdout
    assert "pass" in result.stdout


def test_failing_verdict_exits_one(tmp_path):
    text = "p: 3\nA = mu_p(t)\nB = mu_p(t)\nconfig C = A, B\nnode x: A@0 B@0\nkummerian C\n"
    result = CliRunner().invoke(cli, ["run", write(tmp_path, text), "--json", "--prec", "8", "--window", "-16:16"])
    assert result.exit_code == 1


def test_usage_errors_exit_two(tmp_path):
    path = write(tmp_path, DOCUMENT)
    assert CliRunner().invoke(cli, ["run", path, "--window", "5:1"]).exit_code == 2
    assert CliRunner().invoke(cli, ["run", path, "--extend", "sometimes"]).exit_code == 2
    assert CliRunner().invoke(cli, ["run", path, "--prec", "1"]).exit_code == 2
    broken = write(tmp_path, "mode: mixed\nu = 1 + pi^3 T\n", "broken.txt")
    assert CliRunner().invoke(cli, ["run", broken]).exit_code == 2
    bad_prime = write(tmp_path, "p: 4\n", "prime.txt")
    assert CliRunner().invoke(cli, ["run", bad_prime]).exit_code == 2


def test_fmt(tmp_path):
    result = CliRunner().invoke(cli, ["fmt", write(tmp_path, DOCUMENT)])
    assert result.exit_code == 0
    assert result.stdout == "mode: mixed\np: 3\nu = 1 + l^3*T^-1\nclassify u\nsp-check T, T\n"


def test_serve_hands_the_app_to_uvicorn(monkeypatch):
    import uvicorn

    calls = []
    monkeypatch.setattr(uvicorn, "run", lambda app, **kwargs: calls.append((app, kwargs)))
    result = CliRunner().invoke(cli, ["serve", "--port", "9001"])
    assert result.exit_code == 0
    assert calls == [("server.app:app", {"host": "127.0.0.1", "port": 9001})]
