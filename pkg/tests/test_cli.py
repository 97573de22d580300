import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from sdpgroup import cli
from sdpgroup.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_counts(capsys):
    code, out, _ = run(capsys, "counts", "--p", "3", "--n", "5", "--format", "json")
    assert code == 0 and json.loads(out)["total"] == "2664"
    assert json.loads(run(capsys, "counts", "--p", "7", "--n", "2", "--format", "json")[1])["total"] == "10"
    assert json.loads(run(capsys, "counts", "--p", "3", "--n", "1", "--format", "json")[1])["total"] == "2"
    code, out, _ = run(capsys, "counts", "--p", "3", "--n", "5", "--poly", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert ["total", "2664"] in rows
    assert ["poly", "6", "4", "6", "6", "6", "2", "2"] in rows
    assert "total: 2664" in run(capsys, "counts", "--p", "3", "--n", "5")[1]


def test_sd_methods(capsys):
    code, out, _ = run(capsys, "sd", "--p", "3", "--n", "2", "--q", "2", "--method", "all", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["sd"] == "5/6" and doc["agreement"] is True
    assert set(doc["results"]) == {"oracle", "fast", "csizes"}
    code, out, _ = run(capsys, "sd", "--p", "3", "--n", "3", "--q", "2", "--method", "fast", "--format", "json")
    assert json.loads(out)["sd"] == "34/49"
    code, out, _ = run(capsys, "sd", "--p", "5", "--n", "2", "--q", "2", "--method", "oracle", "--format", "json")
    assert json.loads(out)["sd"] == "11/16"
    code, out, _ = run(capsys, "sd", "--p", "5", "--n", "2", "--q", "2", "--format", "csv")
    assert "fast,11/16,0.687500" in out


def test_sd_refusals(capsys):
    code, _, err = run(capsys, "sd", "--p", "3", "--n", "7", "--q", "2", "--method", "oracle")
    assert code == 2 and "400" in err
    code, out, _ = run(capsys, "sd", "--p", "3", "--n", "8", "--q", "2", "--method", "all", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and set(doc["skipped"]) == {"oracle", "csizes"}


def test_sd_disagreement_exits_3(capsys, monkeypatch):
    monkeypatch.setattr(cli.pgrouplat, "sd_fast", lambda params: Fraction(1, 2))
    code, _, err = run(capsys, "sd", "--p", "3", "--n", "2", "--q", "2", "--method", "all")
    assert code == 3 and "disagree" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["sd", "--p", "5", "--n", "2", "--q", "4"],
        ["sd", "--p", "4", "--n", "2", "--q", "3"],
        ["sd", "--p", "7", "--n", "2", "--q", "5"],
        ["audit", "--p", "3", "--n", "1", "--q", "2"],
        ["counts", "--p", "6", "--n", "2"],
        ["trend", "--p", "3", "--nmin", "5", "--nmax", "4"],
        ["sd", "--p", "3"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == 1


def test_argparse_usage_exit_code():
    proc = subprocess.run([sys.executable, "-m", "sdpgroup", "sd", "--p", "3"], capture_output=True)
    assert proc.returncode == 1


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--p", "3", "--n", "2", "--q", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["sd_le_bound"] is False and doc["sd"] == "5/6" and doc["bound_rhs"] == "13/18"
    doc = json.loads(run(capsys, "audit", "--p", "3", "--n", "3", "--q", "2")[1])
    assert all(entry["ok"] for entry in doc["per_k"])
    assert doc["per_k"][0] == {"k": 0, "c_max": "12", "c_bound": "13", "ok": True}
    doc = json.loads(run(capsys, "audit", "--p", "3", "--n", "4", "--q", "2")[1])
    assert isinstance(doc["eq4_exact"], str) and int(doc["eq4_exact"]) > 0
    assert isinstance(doc["eq4_majorant"], str) and int(doc["eq4_majorant"]) > 0
    assert doc["params"] == {"p": 3, "n": 4, "q": 2, "r": 2}


def test_audit_refusal(capsys, monkeypatch):
    monkeypatch.setattr(cli.pgrouplat, "DEFAULT_BUDGET", 10)
    original = cli.pgrouplat.audit
    monkeypatch.setattr(cli.pgrouplat, "audit", lambda n, p, q: original(n, p, q, budget=10))
    code, _, err = run(capsys, "audit", "--p", "3", "--n", "3", "--q", "2")
    assert code == 2 and "budget" in err


def test_trend(capsys):
    code, out, _ = run(capsys, "trend", "--p", "3", "--nmin", "2", "--nmax", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["n", "a_ratio", "a_ratio_decimal", "p_pow", "p_pow_decimal", "sd", "sd_decimal"]
    assert [r["sd"] for r in rows[:2]] == ["5/6", "34/49"]
    assert Fraction(rows[1]["a_ratio"]) == Fraction(6, 28)
    assert rows[0]["p_pow"] == "1/3" and rows[0]["p_pow_decimal"] == "0.333333"


def test_trend_time_budget(capsys):
    code, out, _ = run(capsys, "trend", "--p", "3", "--nmin", "2", "--nmax", "9", "--max-seconds", "0")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[-1][0] == "warning"
    assert len(rows) < 9


def test_round_trip_of_emitted_rationals(capsys):
    out = run(capsys, "trend", "--p", "5", "--nmin", "2", "--nmax", "8", "--format", "json")[1]
    for row in json.loads(out)["rows"]:
        for key in ("a_ratio", "p_pow", "sd"):
            x = Fraction(row[key])
            assert f"{x.numerator}/{x.denominator}" == row[key]


def test_determinism_and_cache(capsys, tmp_path, monkeypatch):
    argv = ["trend", "--p", "3", "--nmin", "2", "--nmax", "8", "--format", "json"]
    cold = run(capsys, *argv)[1]
    assert run(capsys, *argv)[1] == cold
    cache = tmp_path / "cache"
    first = run(capsys, *argv, "--cache-dir", str(cache))[1]
    files = list(cache.glob("trend-*.json"))
    assert len(files) == 1
    monkeypatch.setattr(cli.pgrouplat, "trend_table", lambda *a: pytest.fail("cache miss"))
    second = run(capsys, *argv, "--cache-dir", str(cache))[1]
    assert first == second == cold
    assert not list(cache.glob("*.tmp"))


def test_cache_env_var_and_version_stamp(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
    out = run(capsys, "audit", "--p", "3", "--n", "2", "--q", "2")[1]
    (path,) = tmp_path.glob("audit-*.json")
    doc = json.loads(path.read_text())
    assert doc["version"] == cli.__version__
    doc["version"] = "0.0.0-stale"
    doc["payload"]["sd"] = "stale"
    path.write_text(json.dumps(doc))
    assert run(capsys, "audit", "--p", "3", "--n", "2", "--q", "2")[1] == out


def test_output_file(capsys, tmp_path):
    target = tmp_path / "sd.json"
    code, out, _ = run(capsys, "sd", "--p", "3", "--n", "3", "--q", "2", "--format", "json", "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["sd"] == "34/49"


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick")
    assert code == 0
    assert "predicate certification" in out and "FAIL" not in out
