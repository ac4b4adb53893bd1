import io
import json
import subprocess
import sys

import pytest

from pivotres.cli import main

PATH = "vars: w x y z\ngens: w*x, x*y, y*z\n"
I1 = "vars: w x y z\ngens: w*x, x*y, y*z, w*z\n"
I2 = "vars: u w x y z\ngens: u, w*x, x*y, y*z\n"
MAX_SQ = "vars: x y\ngens: x^2, x*y, y^2\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in {"path": PATH, "i1": I1, "i2": I2, "max_sq": MAX_SQ,
                       "ci2": "vars: x y\ngens: x^2, y^2\n",
                       "bad": "vars: x y\ngens: x, x*y\n",
                       "undeclared": "vars: x y\ngens: x*q\n",
                       "ci_sum": "a: x^2 + y^2\n", "ci_mono": "a: x^2\n",
                       "ci_two": "a: x^2\na: x*y - y^2\n"}.items():
        p = tmp_path / f"{name}.txt"
        p.write_text(text, encoding="utf-8")
        out[name] = str(p)
    return out


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_scarf(files):
    assert run("scarf", files["i2"]) == (0, "2\n")
    assert run("scarf", files["ci2"]) == (0, "inf\n")
    code, out = run("scarf", files["i2"], "--format", "json")
    assert json.loads(out) == {"scarf_number": 2}


def test_betti(files):
    assert run("betti", files["i1"]) == (0, "1 4 4 1\n")
    assert run("betti", files["i2"]) == (0, "1 4 5 2\n")


def test_smallest_pivot_and_gaps(files):
    assert run("smallest-pivot", files["i2"]) == (0, "2,4\n")
    assert run("smallest-pivot", files["ci2"]) == (1, "none\n")
    assert run("gaps", files["path"], "--indices", "1,3") == (0, "2\n")
    assert run("gaps", files["path"], "--indices", "1,2") == (1, "none\n")


def test_pivot_then_verify_exactness(files, tmp_path):
    code, out = run("pivot", files["path"], "--indices", "1,2", "--format", "json")
    assert code == 0
    cpx = tmp_path / "p12.json"
    cpx.write_text(out, encoding="utf-8")
    code, out = run("verify", files["path"], "--complex", str(cpx), "--what", "exactness", "--format", "json")
    assert code == 1
    cert = json.loads(out)
    (check,) = cert["checks"]
    assert check["identity"] == "H_1 = 0 at multidegree w*x*y"
    assert check["witness"]["cycle"] == [{"cell": [1], "coeff": "-y"}, {"cell": [2], "coeff": "w"}]
    assert cert["command"] == "verify --what exactness" and len(cert["inputs"]) == 2


def test_verify_resolution_and_d2(files):
    code, out = run("verify", files["path"], "--indices", "1,3", "--what", "exactness")
    assert code == 0 and "[pass]" in out
    code, out = run("verify", files["i1"], "--what", "d2")
    assert code == 0 and "d_{i-1} d_i = 0" in out


def test_verify_dg(files):
    code, out = run("verify", files["max_sq"], "--indices", "1,3", "--what", "dg", "--format", "json")
    cert = json.loads(out)
    assert code == 0 and len(cert["checks"]) == 5 and cert["passed"]
    code, out = run("verify", files["path"], "--indices", "1,2", "--what", "dg")
    assert code == 1 and "FAIL" in out


def test_homotopy_and_shamash(files):
    code, out = run("homotopy", files["max_sq"], "--ci", files["ci_two"], "--indices", "1,3", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["certificate"]["passed"]
    assert {c["identity"].split(" on ")[0] for c in payload["certificate"]["checks"]} >= {
        "sigma_0^2 = 0", "sigma_e1 sigma_e2 + sigma_e2 sigma_e1 = 0"}
    code, out = run("verify", files["max_sq"], "--what", "homotopy", "--ci", files["ci_sum"])
    assert code == 0
    code, out = run("shamash", files["max_sq"], "--ci", files["ci_sum"], "--indices", "1,3",
                    "--truncate", "5", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["ranks"] == [1, 3, 3, 3, 3, 3]
    assert "not asserted" in payload["exactness_over_R"]
    code, out = run("shamash", files["max_sq"], "--ci", files["ci_mono"], "--indices", "1,3",
                    "--truncate", "5", "--strand-bound", "6,6", "--trust-regular")
    assert code == 0 and "strand homology over R vanishes" in out and "assumed regular" in out


def test_bounds(files):
    code, out = run("bounds", files["max_sq"], "--r", "1", "--max-degree", "4", "--format", "json")
    rows = json.loads(out)["bounds"]
    assert [r["structural"] for r in rows] == [1, 3, 3, 3, 3]
    assert [r["paper_literal"] for r in rows] == [1, 3, 4, 0, 0]
    assert run("bounds", files["ci2"], "--r", "1")[0] == 1


def test_lyubeznik_and_morse(files, tmp_path):
    code, out = run("lyubeznik", files["max_sq"], "--order", "1,3,2")
    assert code == 0 and out.startswith("lyubeznik: ranks 1 3 2")
    m = tmp_path / "m.txt"
    m.write_text("1,2,3 -> 1,3\n", encoding="utf-8")
    code, out = run("morse", files["max_sq"], "--matching", str(m))
    assert code == 0 and "ranks 1 3 2" in out
    m.write_text("1,2 -> 1\n", encoding="utf-8")
    code, out = run("morse", files["max_sq"], "--matching", str(m))
    assert code == 1 and "condition 2" in out
    m.write_text("1,2 1\n", encoding="utf-8")
    assert run("morse", files["max_sq"], "--matching", str(m))[0] == 2


def test_taylor_output_deterministic(files):
    a = run("taylor", files["i1"], "--format", "json")
    b = run("taylor", files["i1"], "--format", "json")
    assert a == b and a[0] == 0


def test_usage_errors(files, capsys):
    assert run("frobnicate", files["path"])[0] == 2
    assert run("scarf", files["bad"])[0] == 2
    assert "x divides x*y" in capsys.readouterr().err
    assert run("scarf", files["undeclared"])[0] == 2
    assert run("pivot", files["path"], "--indices", "1,a")[0] == 2
    assert run("pivot", files["path"], "--indices", "1")[0] == 2
    assert run("scarf", files["path"] + ".missing")[0] == 2
    assert run("lyubeznik", files["path"], "--order", "1,1,2")[0] == 2


def test_module_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "pivotres", "betti", files["i2"]],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1 4 5 2\n"
