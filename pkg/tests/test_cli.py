import json
import math

import numpy as np
import pytest

from arithcurve.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out.strip().splitlines()[-1])


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_field_command(capsys):
    code, rep = run(capsys, "field", "--m", "-5")
    assert code == 0
    assert rep["disc"] == -20 and rep["r2"] == 1 and rep["schema"] == 1


def test_classgroup_command(capsys):
    code, rep = run(capsys, "classgroup", "--m", "-5")
    assert code == 0 and rep["h"] == 2
    code, rep = run(capsys, "classgroup", "--m", "-23")
    assert code == 0 and rep["h"] == 3


def test_units_commands(capsys):
    code, rep = run(capsys, "units", "fundamental", "--m", "2")
    assert code == 0
    assert rep["fundamental"] == {"a": "1", "b": "1"}
    lam = math.log(1 + math.sqrt(2))
    code, rep = run(capsys, "units", "realize", "--m", "2", "--xi", f"{lam},{-lam}")
    assert code == 0
    assert rep["combination"][0]["exponent"] == pytest.approx(1.0)
    assert rep["residual"] < 1e-10


def test_divisor_and_shortsec_commands(tmp_path, capsys):
    ck = math.log(4 / math.pi)
    dpath = write(tmp_path, "d.json", {"coeffs": [], "green": [ck, ck]})
    code, rep = run(capsys, "divisor", "--m", "-1", "--divisor", dpath)
    assert code == 0
    assert rep["deg_arith"] == pytest.approx(ck)
    assert rep["effective"] is True
    code, rep = run(capsys, "shortsec", "--m", "-1", "--divisor", dpath)
    assert code == 0
    assert rep["effective"] is True
    assert abs(int(json.loads(json.dumps(rep))["norm"].split("/")[0])) == 1


def test_minimize_command(tmp_path, capsys):
    fpath = write(tmp_path, "f.json", {"m": 2})
    dpath = write(tmp_path, "d.json", {"coeffs": [], "green": [2.0, 0.0]})
    gpath = write(
        tmp_path, "g.json", {"gens": [{"factors": [{"a": "1", "b": "1", "e": "1"}]}]}
    )
    code, rep = run(
        capsys, "minimize", "--field", fpath, "--divisor", dpath, "--gens", gpath
    )
    assert code == 0
    assert rep["log_value"] == pytest.approx(-0.5, abs=1e-9)
    assert max(rep["residuals"].values()) < 1e-8


def test_pipeline_and_decide_commands(tmp_path, capsys):
    dpath = write(
        tmp_path,
        "d.json",
        {
            "coeffs": [{"p": 5, "index": 0, "c": "1"}, {"p": 5, "index": 1, "c": "-1"}],
            "green": [0.0, 0.0],
        },
    )
    code, rep = run(capsys, "pipeline", "--m", "-1", "--divisor", dpath)
    assert code == 0
    assert abs(rep["log_value"]) < 1e-8
    code, rep = run(capsys, "decide", "--m", "-1", "--divisor", dpath)
    assert code == 0
    assert rep["status"] == "PSEUDO_EFFECTIVE"

    neg = write(tmp_path, "neg.json", {"coeffs": [], "green": [-1.0, -1.0]})
    code, rep = run(capsys, "decide", "--m", "-1", "--divisor", neg)
    assert code == 0
    assert rep["status"] == "NOT"


def test_pipeline_degree_violation_exit_2(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"coeffs": [], "green": [1.0, 1.0]})
    code, rep = run(capsys, "pipeline", "--m", "-1", "--divisor", bad)
    assert code == 2
    assert "deg" in rep["error"]


def test_parse_error_exit_1(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, rep = run(capsys, "divisor", "--m", "-1", "--divisor", str(path))
    assert code == 1


def test_linalg_commands(tmp_path, capsys):
    zpath = write(tmp_path, "z.json", {"q": [[-1, 1], [1, -1]], "a": [1, 1]})
    code, rep = run(capsys, "linalg", "zariski", "--input", zpath)
    assert code == 0
    assert rep["kind"] == "NEG_SEMIDEFINITE_KERNEL_e"
    bpath = write(
        tmp_path, "b.json", {"q": [[-1, 1], [1, -1]], "a": [1, 1], "rhs": [1, -1]}
    )
    code, rep = run(capsys, "linalg", "balance", "--input", bpath)
    assert code == 0
    assert rep["x"] == ["2", "1"]
    gpath = write(tmp_path, "g.json", {"vectors": [[1, 0], [0, 2]]})
    code, rep = run(capsys, "linalg", "gram", "--input", gpath)
    assert code == 0
    assert rep["vol"] == pytest.approx(2.0)


def test_capacity_command(tmp_path, capsys):
    n = 256
    xs = np.arange(n) / n
    grid = np.cos(2 * np.pi * xs)[:, None] * np.ones((1, n))
    f = tmp_path / "f.csv"
    np.savetxt(f, grid, delimiter=",")
    code, rep = run(capsys, "capacity", "pair", "--n", str(n), "--f", str(f), "--g", str(f))
    assert code == 0
    assert rep["value"] == pytest.approx(-math.pi / 2, abs=1e-6)


def test_wellposed_commands(tmp_path, capsys):
    mpath = write(tmp_path, "m.json", {"green": "fubini-study", "nmax": 20})
    code, rep = run(capsys, "wellposed", "report", "--model", mpath, "--n", "6")
    assert code == 0
    assert rep["conditions"] == {
        "basis": True,
        "integral_index": True,
        "volume_ratio": True,
    }
    code, rep = run(capsys, "wellposed", "scan", "--model", mpath, "--n", "2")
    assert code == 0
    assert rep["k_star"] == 1 and rep["integer_norm"] == pytest.approx(0.5)


def test_reports_byte_identical(tmp_path, capsys):
    outs = []
    for _ in range(2):
        code = main(["classgroup", "--m", "-23"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["field", "--m", "2", "--out", str(target)])
    capsys.readouterr()
    assert code == 0
    assert json.loads(target.read_text())["disc"] == 8
