import json
import subprocess
import sys

import pytest

from runcube.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("7") == [7]


def test_stats_run(capsys):
    code, out, _ = run(capsys, "stats", "--n", "1..6", "--family", "run", "--format", "csv")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()[1:]]
    assert [int(r[2]) for r in rows] == [1, 2, 5, 10, 19, 36]


def test_stats_fibcube_and_zero(capsys):
    code, out, _ = run(capsys, "stats", "--n", "5", "--family", "fibcube", "--format", "json")
    assert code == 0 and json.loads(out)[0]["edges"] == 20
    code, out, _ = run(capsys, "stats", "--n", "0", "--format", "json")
    row = json.loads(out)[0]
    assert (row["vertices"], row["edges"]) == (1, 0)


def test_capacity_is_usage_error(capsys):
    code, _, err = run(capsys, "stats", "--n", "31")
    assert code == 2 and "error" in err
    assert run(capsys, "export", "--n", "40")[0] == 2
    assert run(capsys, "ratios", "--n-max", "95")[0] == 2
    assert run(capsys, "verify", "--n-max", "0")[0] == 2


def test_bad_arguments_exit_two(capsys):
    assert run(capsys, "stats", "--n", "5..1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2


def test_export_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "export", "--n", "1", "--format", "csv")
    assert code == 0 and out == "0,1\n"
    _, dot, _ = run(capsys, "export", "--n", "3", "--family", "run", "--format", "dot")
    assert dot.count("--") == 5 and sum(1 for l in dot.splitlines() if l.strip().startswith('"') and "--" not in l) == 5
    _, again, _ = run(capsys, "export", "--n", "3", "--family", "run", "--format", "dot")
    assert dot == again
    target = tmp_path / "g.json"
    assert run(capsys, "export", "--n", "4", "--format", "json", "-o", str(target))[0] == 0
    assert json.loads(target.read_text())["n"] == 4


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "4")
    assert code == 0
    assert "PASS: graph: R_n isomorphic to Gamma_n for 1 <= n <= 4" in out
    assert "FAIL:" not in out


def test_verify_ten(capsys):
    code, out, _ = run(capsys, "verify", "--n-max", "10")
    assert code == 0
    assert "partial cube: true for n <= 6, false for 7 <= n <= 10" in out
    assert "FINDING:" in out


def test_diameter_csv(capsys):
    code, out, err = run(capsys, "diameter", "--n", "1..8")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,exact,conjectured,lower_bound"
    assert lines[4].split(",")[:3] == ["4", "4", "4"]
    assert lines[8].split(",")[:3] == ["8", "7", "7"]
    assert err.startswith("FINDING:")


def test_degrees(capsys):
    code, out, _ = run(capsys, "degrees", "--n", "4")
    assert code == 0
    assert "1 + 4*d + 3*d^2" in out and "3 + 2*u + 2*u^2 + u^4" in out and "5*x^2 + 2*x^3 + x^4" in out
    code, out, _ = run(capsys, "degrees", "--n", "1..6", "--format", "json")
    assert all(r["matches_gf"] for r in json.loads(out))


def test_cubes(capsys):
    code, out, err = run(capsys, "cubes", "--n", "1..4")
    assert code == 0 and err == ""
    assert out.splitlines()[3] == "n=4: 1 + 4q + 3q^2 + (4 + 6q)x + 3x^2"
    code, out, err = run(capsys, "cubes", "--n", "6", "--format", "json")
    data = json.loads(out)[0]
    assert {"q": 0, "x": 2, "count": 10} in data["terms"]
    assert {"q": 0, "x": 2, "count": 12} in data["slack_terms"]
    assert "FINDING" in err


def test_hamilton(capsys):
    code, out, _ = run(capsys, "hamilton", "--n", "4", "--mode", "cycle")
    data = json.loads(out)
    assert code == 0 and data["answer"] == "yes" and data["verified"]
    code, out, _ = run(capsys, "hamilton", "--n", "5..6", "--mode", "both")
    answers = [(d["n"], d["mode"], d["answer"]) for d in json.loads(out)]
    assert answers == [(5, "cycle", "no"), (5, "path", "yes"), (6, "cycle", "no"), (6, "path", "yes")]


def test_hamilton_budget_timeout_is_finding(capsys):
    code, out, err = run(capsys, "hamilton", "--n", "10", "--mode", "cycle", "--budget", "10")
    assert code == 0 and json.loads(out)["answer"] == "timeout"
    assert "FINDING" in err


def test_ratios(capsys):
    code, out, _ = run(capsys, "ratios", "--n-max", "30")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("n,edge_ratio")
    assert lines[30].startswith("30,0.8732")


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "runcube", "export", "--n", "1", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0 and out.stdout == "0,1\n"
