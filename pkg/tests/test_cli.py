import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cslkit import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "cubic.csl", "9")
    assert code == 0 and json.loads(out) == {"family": "cubic.csl", "n": 9, "value": 12}
    assert json.loads(run(capsys, "count", "sq.all", "1")[1])["value"] == 1
    assert json.loads(run(capsys, "count", "d4.csl", "9")[1])["value"] == 152
    code, _, err = run(capsys, "count", "no.such", "3")
    assert code == 2 and "unknown family" in err


def test_series(capsys):
    code, out, _ = run(capsys, "series", "a4.rot", "11")
    assert code == 0 and json.loads(out)["coeffs"][-1] == 144
    assert json.loads(run(capsys, "series", "sq.mcsl", "25")[1])["coeffs"][24] == 3
    assert json.loads(run(capsys, "series", "cubic.csl", "1")[1])["coeffs"] == [1]
    code, out, _ = run(capsys, "series", "cubic.csl", "9", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "value"] and rows[9] == ["9", "12"]
    assert run(capsys, "series", "cubic.csl", "0")[0] == 2


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    names = [line.split()[0] for line in out.splitlines()]
    assert code == 0 and names == sorted(names)
    for name in ("sq.csl", "cubic.mcsl2", "d4.rot", "a4.csl", "ico.ssm", "cyc5.csm", "cn1.-7.ssl"):
        assert name in names


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "sq.*", "--max", "60")
    reps = json.loads(out)
    assert code == 0 and {r["family"] for r in reps} >= {"sq.csl", "sq.wr", "sq.mcsl"}
    assert all(r["mismatches"] == [] for r in reps)
    code, out, _ = run(capsys, "verify", "d4.csl", "--max", "9")
    rep = json.loads(out)
    assert code == 0 and rep["range"] == [1, 9] and rep["mismatches"] == []
    assert set(rep) == {"family", "range", "mismatches", "runtime"}
    assert run(capsys, "verify", "ico.csm", "--max", "5")[0] == 2
    assert run(capsys, "verify", "d4.csl", "--max", "500")[0] == 2


def test_verify_threads(capsys, monkeypatch):
    monkeypatch.setenv("CSLKIT_THREADS", "4")
    code, out, _ = run(capsys, "verify", "hex.ssl", "--max", "40")
    assert code == 0 and json.loads(out)["mismatches"] == []


def test_verify_reports_mismatch(capsys, monkeypatch):
    from cslkit import registry
    f = registry.get("sq.ssl")
    bad = registry.Family("sq.ssl", f.coeffs, oracle=lambda n: f.oracle(n) + (n == 5),
                          oracle_max=10)
    monkeypatch.setitem(registry.REGISTRY, "sq.ssl", bad)
    code, out, _ = run(capsys, "verify", "sq.ssl", "--max", "10")
    assert code == 1 and json.loads(out)["mismatches"] == [{"n": 5, "formula": 2, "oracle": 3}]


def test_table1(capsys):
    code, out, _ = run(capsys, "table1", "--max", "60", "--source", "both")
    rep = json.loads(out)
    assert code == 0 and rep["source_mismatches"] == []
    co = rep["rows"]["coincidence"]
    assert co[52] == 2 and co[48] == 0 and co[0] == 1
    code, out, _ = run(capsys, "table1", "--max", "5", "--format", "csv")
    assert out.splitlines()[0] == "row,1,2,3,4,5"


def test_csl(capsys):
    code, out, _ = run(capsys, "csl", "--lattice", "square", "--z", "2,1")
    assert code == 0 and json.loads(out)["sigma"] == 5
    assert json.loads(run(capsys, "csl", "--lattice", "bcc", "--q", "1,1,1,0")[1])["sigma"] == 3
    assert json.loads(run(capsys, "csl", "--lattice", "pc", "--q", "1,0,0,0")[1])["sigma"] == 1
    rep = json.loads(run(capsys, "csl", "--lattice", "d4", "--pair", "1,1,1,0;1,1,0,1")[1])
    assert rep["sigma"] == 3
    rep = json.loads(run(capsys, "csl", "--lattice", "z4", "--pair", "1,0,0,0;1,0,0,0")[1])
    assert rep["sigma"] == 1
    rep = json.loads(run(capsys, "csl", "--lattice", "a4", "--q", "1 1 0 0")[1])
    assert rep["sigma"] == 2
    assert run(capsys, "csl", "--lattice", "square")[0] == 2
    assert run(capsys, "csl", "--lattice", "d4", "--pair", "1,1,1,0;1,2,0,0")[0] == 2


def test_overlap_plot(tmp_path, capsys):
    out = tmp_path / "ov.csv"
    code, _, _ = run(capsys, "overlap-plot", "--z", "2,1", "--radius", "5", "--out", str(out))
    assert code == 0 and out.with_suffix(".png").stat().st_size > 0
    rows = list(csv.DictReader(out.open(encoding="utf-8")))
    by = {}
    for r in rows:
        by.setdefault(r["tag"], set()).add((r["x"], r["y"]))
    assert by["CSL"] == by["Γ"] & by["RΓ"]
    assert len(by["CSL"]) > 1
    code, text, _ = run(capsys, "overlap-plot", "--z", "1,0", "--radius", "3")
    rows = list(csv.DictReader(io.StringIO(text)))
    by = {}
    for r in rows:
        by.setdefault(r["tag"], set()).add((r["x"], r["y"]))
    assert by["Γ"] == by["RΓ"] == by["CSL"]
    code, text, _ = run(capsys, "overlap-plot", "--rotation", "3/5,4/5", "--radius", "2", "--exact")
    assert code == 0 and "/5" in text
    assert run(capsys, "overlap-plot", "--z", "1+i")[0] == 2
    assert run(capsys, "overlap-plot", "--rotation", "1/2,1/2")[0] == 2


def test_overlap_decimals():
    R = [[Fraction(3, 5), Fraction(-4, 5)], [Fraction(4, 5), Fraction(3, 5)]]
    text = cli.overlap_csv(cli.overlap_points(R, 2))
    assert "0.6" in text or "-0.2" in text


def test_asym(capsys):
    code, out, _ = run(capsys, "asym", "sq.csl", "1e6", "--model", "1/pi,1,0", "--tol", "0.02")
    assert code == 0 and json.loads(out)["pass"]
    code, out, _ = run(capsys, "asym", "cubic.csl", "100000", "--model", "3/pi^2,2,0")
    assert code == 0
    code, out, _ = run(capsys, "asym", "cubic.csl", "10", "--model", "3/pi^2,2", "--tol", "1e-6")
    assert code == 1 and not json.loads(out)["pass"]
    assert run(capsys, "asym", "cubic.csl", "100", "--model", "banana,2")[0] == 2


def test_report(tmp_path, capsys):
    code, out, _ = run(capsys, "report", "--out", str(tmp_path / "r"), "--N", "30", "--x", "500")
    files = set(json.loads(out)["files"])
    assert code == 0
    assert files == {"series.json", "table1.csv", "table1.png", "asymptotics.csv",
                     "asymptotics.png", "overlap.csv", "overlap.png"}


def test_deterministic(capsys):
    a = run(capsys, "series", "ico.csm", "50")[1]
    b = run(capsys, "series", "ico.csm", "50")[1]
    assert a == b


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "cslkit", "count", "hex.csl", "7"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout)["value"] == 2
