import json
import subprocess
import sys

import pytest

from decomp import checks, cli
from decomp.poset import BudgetExceeded


def run(argv):
    return cli.main([str(a) for a in argv])


def test_build_y(tmp_path):
    out = tmp_path / "y.json"
    assert run(["build", "--building", "thin:A2", "--construct", "Y", "--out", out]) == 0
    doc = json.loads(out.read_text())
    (obj,) = doc["objects"]
    assert obj["construction"] == "Y" and obj["dimension"] == 4 and obj["size"] == 28
    assert len(obj["build_hash"]) == 64
    assert doc["provenance"]["building"] == "thin:A2"


def test_build_several(tmp_path):
    out = tmp_path / "b.json"
    args = ["build", "--building", "A(p=2,n=2)", "--out", out]
    for c in ("building", "PD", "OD(V)"):
        args += ["--construct", c]
    assert run(args) == 0
    objs = json.loads(out.read_text())["objects"]
    assert [o["size"] for o in objs] == [3, 6, 6]


def test_build_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        run(["build", "--building", "A(p=3,n=2)", "--construct", "OPD", "--out", f])
    ha = json.loads(a.read_text())["objects"][0]["build_hash"]
    hb = json.loads(b.read_text())["objects"][0]["build_hash"]
    assert ha == hb


@pytest.mark.parametrize("argv", [
    ["build", "--building", "A(p=4,n=2)"],
    ["build", "--building", "A(p=2,n=2)", "--construct", "nope"],
    ["build"],
    ["check", "--building", "A(p=2,n=2)"],
    ["check", "no-such-check", "--building", "A(p=2,n=2)"],
    ["check", "od-cm", "--building", "thin:Q"],
    ["probe", "interval-sphere", "--building", "A(p=2,n=2)"],
    ["probe", "y-dimension", "--types", "Z5"],
])
def test_config_errors(argv, capsys):
    assert run(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_prime_message(capsys):
    run(["build", "--building", "A(p=4,n=2)"])
    assert "p must be prime" in capsys.readouterr().err


def test_bad_config_file(tmp_path):
    bad = tmp_path / "c.json"
    bad.write_text("{not json")
    assert run(["check", "od-cm", "--config", bad]) == 2
    bad.write_text(json.dumps({"building": "A(p=2,n=2)", "budgets": {"seconds": -1}}))
    assert run(["check", "od-cm", "--config", bad]) == 2


def test_check_passes_and_hash_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert run(["check", "cb-pd-equiv", "od-cm", "--building", "A(p=2,n=2)", "--out", f]) == 0
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert ra["report_hash"] == rb["report_hash"]
    assert ra["provenance"]["config_hash"] == rb["provenance"]["config_hash"]
    assert [c["status"] for c in ra["checks"]] == ["pass", "pass"]


def test_config_file(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"building": "A(p=3,n=2)", "subgroups": [
        {"field": 3, "generators": [[[2, 0], [0, 1]], [[1, 0], [0, 2]]]}]}))
    out = tmp_path / "r.json"
    assert run(["check", "vs-crossed", "--config", cfg, "--out", out]) == 0
    vals = json.loads(out.read_text())["checks"][0]["values"]
    assert vals["H0"]["ordered"]["sizes"] == [4, 4]


def test_failing_theorem_exit_1(monkeypatch, tmp_path):
    monkeypatch.setitem(checks.CHECKS, "od-cm", (lambda b, ctx: (False, {}), "theorem"))
    assert run(["check", "od-cm", "--building", "A(p=2,n=2)", "--out", tmp_path / "r.json"]) == 1


def test_probe_never_fails(monkeypatch, tmp_path):
    monkeypatch.setitem(checks.CHECKS, "y-question", (lambda b, ctx: (False, {}), "probe"))
    out = tmp_path / "r.json"
    assert run(["check", "y-question", "--building", "thin:A2", "--out", out]) == 0
    assert json.loads(out.read_text())["checks"][0]["status"] == "probe"


def test_unknown_status_on_thin(tmp_path):
    out = tmp_path / "r.json"
    assert run(["check", "les-steinberg", "--building", "thin:A2", "--out", out]) == 0
    assert json.loads(out.read_text())["checks"][0]["status"] == "unknown"


def test_budget_exit_3(monkeypatch, tmp_path):
    def boom(b, ctx):
        raise BudgetExceeded("too big")
    monkeypatch.setitem(checks.CHECKS, "d-cm", (boom, "theorem"))
    assert run(["check", "d-cm", "--building", "A(p=2,n=2)", "--out", tmp_path / "r.json"]) == 3


def test_report_merge(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["check", "od-cm", "--building", "A(p=2,n=2)", "--out", a])
    run(["check", "d-cm", "--building", "A(p=2,n=2)", "--out", b])
    md, cv = tmp_path / "t.md", tmp_path / "t.csv"
    assert run(["report", a, b, a, "--markdown", md, "--csv", cv]) == 0
    lines = md.read_text().splitlines()
    assert len(lines) == 4 and "d-cm" in lines[2] and "od-cm" in lines[3]
    assert cv.read_text().splitlines()[0] == "building,check,status,summary,report_hash"


def test_report_conflict(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["check", "od-cm", "--building", "A(p=2,n=2)", "--out", a])
    rep = json.loads(a.read_text())
    rep["checks"][0]["status"] = "fail"
    rep["report_hash"] = cli.report_hash(rep)
    b.write_text(json.dumps(rep))
    assert run(["report", a, b]) == 2
    err = capsys.readouterr().err
    assert "conflicting" in err and rep["report_hash"] in err


def test_report_empty(capsys):
    assert run(["report"]) == 0
    assert capsys.readouterr().out.count("\n") == 2


def test_probes(tmp_path):
    out = tmp_path / "p.json"
    assert run(["probe", "y-dimension", "--types", "A1", "A2", "--out", out]) == 0
    rows = json.loads(out.read_text())["rows"]
    assert [r["dim_Y"] for r in rows] == [1, 4]
    assert run(["probe", "upper-conjecture", "--building", "A(p=2,n=2)", "--out", out]) == 0
    assert len(json.loads(out.read_text())["rows"]) == 3
    assert run(["probe", "interval-sphere", "--building", "thin:A2", "--out", out]) == 0
    assert all(r["homology_iso"] for r in json.loads(out.read_text())["rows"])


def test_report_hash_ignores_timing():
    r = {"checks": [{"seconds": 1.0, "x": 1}], "provenance": {"timestamp": "t1"}}
    s = {"checks": [{"seconds": 2.5, "x": 1}], "provenance": {"timestamp": "t2"}}
    assert cli.report_hash(r) == cli.report_hash(s)
    s["checks"][0]["x"] = 2
    assert cli.report_hash(r) != cli.report_hash(s)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "decomp.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "check" in res.stdout
