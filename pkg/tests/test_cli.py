"""Command-line driver: listing, exit codes, reports."""

import json

import pytest

from gkspin import checks, cli
from gkspin.constructions import ConstructionError


def run(argv, tmp_path, capsys):
    report = tmp_path / "r.json"
    code = cli.main(list(argv) + ["--report", str(report)])
    out = capsys.readouterr()
    return code, out, report


def test_list(capsys):
    assert cli.main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) >= 25
    rows = {ln.split("\t")[0]: ln.split("\t") for ln in lines}
    assert rows["three2"][2] == '"denotes the divergence of A"'
    assert rows["nxi"][2] == '"thus ξ is a Killing vector field"'
    assert all(len(r) == 3 for r in rows.values())


def test_passing_suite(tmp_path, capsys):
    code, out, report = run(["s3", "--samples", "4", "--seed", "3"], tmp_path, capsys)
    assert code == 0
    data = json.loads(report.read_text())
    assert list(data) == ["tool", "report_version", "config", "conventions", "checks", "summary"]
    assert data["config"]["seed"] == 3
    assert data["summary"]["status"] == "pass"
    for c in data["checks"]:
        assert set(c) == {"suite", "id", "module", "anchor", "target", "aggregate", "points",
                          "applicable_points", "max_residual", "tolerance", "verdict"}
    assert "report written" in out.out


def test_tolerance_override_forces_failure(tmp_path, capsys):
    code, out, report = run(["s3", "--samples", "3", "--tol", "gks=1e-30"], tmp_path, capsys)
    assert code == 1
    data = json.loads(report.read_text())
    gks = next(c for c in data["checks"] if c["id"] == "gks")
    assert gks["verdict"] == "fail" and gks["tolerance"] == 1e-30
    assert data["config"]["tolerance_overrides"] == {"gks": 1e-30}


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["dim4", "--model", "s3-gks"],
    ["dim4", "--model", "unknown:thing"],
    ["s3", "--tol", "nosuch=1"],
    ["s3", "--tol", "gks"],
    ["s3", "--tol", "gks=abc"],
    ["s3", "--samples", "0"],
    ["s3", "--seed", "-1"],
    ["all", "--model", "s3-gks"],
    ["models", "--model", "torus"],
    ["clifford", "--model", "12"],
    ["s3", "--samples", "many"],
])
def test_usage_errors(argv, tmp_path, capsys):
    code, _, report = run(argv, tmp_path, capsys)
    assert code == 2
    assert not report.exists()


def test_construction_failure(tmp_path, capsys, monkeypatch):
    def broken(name):
        raise ConstructionError("forced")

    monkeypatch.setattr(checks, "construct", broken)
    code, out, _ = run(["s3", "--samples", "1"], tmp_path, capsys)
    assert code == 3
    assert "forced" in out.err


def test_default_report_location(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(cli.REPORT_DIR_ENV, str(tmp_path / "reports"))
    assert cli.main(["dim2", "--samples", "2", "--seed", "5"]) == 0
    capsys.readouterr()
    assert (tmp_path / "reports" / "report-dim2-5.json").exists()


def test_model_override(tmp_path, capsys):
    code, _, report = run(["dim2", "--model", "restrict:paraboloid2", "--samples", "2"], tmp_path, capsys)
    assert code == 0
    data = json.loads(report.read_text())
    assert {c["target"] for c in data["checks"]} == {"restrict:paraboloid2"}


def test_reports_are_deterministic(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for path in (a, b):
        assert cli.main(["hypersurface", "--samples", "3", "--seed", "11", "--report", str(path)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_samples(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    cli.main(["dim2", "--samples", "3", "--seed", "1", "--report", str(a)])
    cli.main(["dim2", "--samples", "3", "--seed", "2", "--report", str(b)])
    capsys.readouterr()
    assert a.read_bytes() != b.read_bytes()


def test_dumps_format():
    text = cli.dumps({"b": 0.1, "a": [1, None, True], "c": {}})
    assert text.index('"b"') < text.index('"a"')
    assert "0.10000000000000001" in text
    assert json.loads(text) == {"b": 0.1, "a": [1, None, True], "c": {}}
    assert cli.format_float(float("nan")) == "null"
