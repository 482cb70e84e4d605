import csv
import io
import json
import subprocess
import sys

import pytest

from qhp.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("argv, expected", [
    (("--family", "qhp", "--n", "4", "--N", "2", "--y", "1"), "x^4 + 12 x^2 + 6"),
    (("--family", "qhp", "--n", "5", "--N", "3", "--y", "0"), "x^5"),
    (("--family", "qbp", "--n", "1", "--N", "7", "--y", "2"), "x + 2"),
    (("--family", "qhp", "--n", "2", "--N", "1", "--y", "-1/2", "--x", "1/3"), "-8/9"),
])
def test_eval(argv, expected):
    code, out = run("eval", *argv)
    assert code == 0 and out.strip() == expected


def test_eval_json_and_coeffs():
    code, out = run("eval", "--family", "qhp", "--n", "4", "--N", "2", "--y", "1", "--format", "json")
    assert code == 0 and json.loads(out)["coefficients"] == ["6", "0", "12", "0", "1"]
    code, out = run("coeffs", "--family", "qhp_two_amp", "--n", "3", "--q", "1", "--p", "2",
                    "--y", "1", "--z", "1", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["power", "coefficient"] and rows[-1] == ["3", "1"]


@pytest.mark.parametrize("argv", [
    ("eval", "--family", "nope", "--n", "1"),
    ("eval", "--family", "qhp", "--n", "-1"),
    ("eval", "--family", "qhp", "--n", "2", "--N", "0"),
    ("eval", "--family", "qhp", "--n", "2", "--y", "half"),
    ("eval", "--family", "qhp_two_amp", "--n", "2", "--q", "2", "--p", "4"),
    ("verify", "--suite", "bogus"),
    ("expand", "--f", "sin", "--y", "1", "--N", "1"),
])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_verify_ode3():
    code, out = run("verify", "--suite", "ode3", "--n-max", "10", "--N-max", "5")
    assert code == 0
    assert "[PASS] ode3: 330/330 cases" in out


def test_verify_composition_reports_gap():
    code, out = run("verify", "--suite", "composition", "--format", "json")
    report = json.loads(out)[0]
    assert code == 0 and report["ok"]
    assert any("n=4, N=1, y=z=1 with gap 24" in note for note in report["notes"])


def test_verify_failure_exit_code(monkeypatch):
    from qhp import verify
    from qhp.polycore import Poly

    broken = verify._simple("ode3", lambda n, N, y: Poly.const(1))
    monkeypatch.setitem(verify.RUNNERS, "ode3", broken)
    code, out = run("verify", "--suite", "ode3", "--n-max", "1", "--N-max", "1")
    assert code == 1 and "first counterexample" in out


def test_expand_examples():
    code, out = run("expand", "--f", "poly:0,0,1", "--y", "1", "--N", "1", "--method", "exact")
    assert code == 0 and out.strip() == "a = [2, 0, 1]"
    code, out = run("expand", "--f", "poly:1", "--y", "1", "--N", "2", "--method", "quadrature",
                    "--format", "json")
    data = json.loads(out)
    assert code == 0 and abs(float(data["a"][0]) - 1) < 1e-8
    code, out = run("expand", "--f", "gauss", "--y", "1", "--N", "4", "--method", "quadrature",
                    "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["a"]) == 13
    assert 0 <= float(data["reconstruction_error"]) < 0.1


def test_expand_domain_errors():
    assert run("expand", "--f", "poly:1", "--y", "0", "--N", "2", "--method", "quadrature")[0] == 3
    assert run("expand", "--f", "expsq", "--y", "1", "--N", "2", "--method", "quadrature")[0] == 3
    assert run("expand", "--f", "gauss", "--y", "1", "--N", "2", "--method", "exact")[0] == 2


def test_glaisher_csv(tmp_path):
    code, out = run("glaisher", "--y", "0.3", "--N", "1,4,16", "--x", "-3:3:121")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and len(rows) == 122 and all(len(r) == 5 for r in rows)
    middle = [float(v) for v in rows[61]]
    assert middle[0] == 0 and middle[1] > middle[2] > middle[3] > middle[4]
    assert abs(middle[4] - 0.6742) < 1e-4
    target = tmp_path / "fig.csv"
    assert run("glaisher", "--y", "1.3", "--out", str(target))[0] == 0
    assert target.read_text() == run("glaisher", "--y", "1.3")[1]


def test_glaisher_unwritable(tmp_path):
    assert run("glaisher", "--y", "1", "--out", str(tmp_path / "no" / "dir.csv"))[0] == 3


def test_glaisher_bad_grid():
    assert run("glaisher", "--y", "1", "--x", "0:1:1")[0] == 2


@pytest.mark.parametrize("n, gaps", [(4, ["12", "6", "3"]), (3, ["0", "0", "0"]), (0, ["0", "0", "0"])])
def test_limit(n, gaps):
    code, out = run("limit", "--n", str(n), "--y", "1", "--N", "1,2,4", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and [r[2] for r in rows[1:4]] == gaps


def test_outputs_are_byte_stable():
    argv = ("glaisher", "--y", "0.3", "--N", "1,2", "--x", "-1:1:5", "--format", "json")
    assert run(*argv)[1] == run(*argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qhp", "eval", "--family", "qhp", "--n", "4",
                           "--N", "2", "--y", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "x^4 + 12 x^2 + 6"
