import json
from pathlib import Path

import pytest

from flatjet.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def test_check(capsys):
    assert main(["check", "laplacian_2d"]) == 0
    out = capsys.readouterr().out
    assert "passed" in out and "(0, 2)" in out
    assert main(["check", "cauchy_riemann"]) == 0


def test_check_nonelliptic(tmp_path):
    from flatjet.operator import DiffOperator
    from flatjet.serialize import write_operator_file

    path = tmp_path / "mixed.json"
    write_operator_file(DiffOperator.from_constants({(1, 1): 1}, 2, 8), path)
    assert main(["check", str(path)]) == 1


def test_input_errors(tmp_path, capsys):
    assert main(["check", str(FIXTURES / "bad_alpha_length.json")]) == 2
    assert "terms[1].alpha" in capsys.readouterr().err
    assert main(["check", str(tmp_path / "missing.json")]) == 2
    assert main(["certify", "laplacian_2d", "--K", "3", "--N", "6", "-o", str(tmp_path / "no" / "c.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["check", "laplacian_2d", "--bogus"])
    assert exc.value.code == 2


def test_uk(capsys, tmp_path):
    trace = tmp_path / "trace.json"
    assert main(["uk", "laplacian_2d", "--k", "3", "--N", "8", "--json", "--trace", str(trace)]) == 0
    terms = json.loads(capsys.readouterr().out)
    assert {(tuple(t["gamma"]), t["re"]) for t in terms} == {((3, 0), "1"), ((1, 2), "-3")}
    dumped = json.loads(trace.read_text())
    assert dumped["stabilized_at"] == 1
    assert len(dumped["iterates"]) == 3


def test_uk_custom_pk(tmp_path, capsys):
    pk = tmp_path / "pk.json"
    pk.write_text(json.dumps([{"gamma": [2, 0], "re": "0", "im": "1"}]))
    assert main(["uk", "cauchy_riemann", "--k", "2", "--N", "6", "--pk", str(pk)]) == 0
    assert "stabilized_at" in capsys.readouterr().out


def test_certify_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["certify", "laplacian_2d", "--K", "10", "--N", "12", "-o", str(a)]) == 0
    assert main(["certify", "laplacian_2d", "--K", "10", "--N", "12", "-o", str(b), "--workers", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["diagonal"][:4] == ["1", "1", "2", "6"]


def test_certify_normalized(tmp_path):
    plain, norm = tmp_path / "p.json", tmp_path / "n.json"
    assert main(["certify", "laplacian_drift", "--K", "4", "--N", "8", "-o", str(plain)]) == 0
    assert main(["certify", "laplacian_drift", "--K", "4", "--N", "8", "-o", str(norm), "--normalize"]) == 0
    p, n = json.loads(plain.read_text()), json.loads(norm.read_text())
    assert p["residual"] == n["residual"] == []
    assert p["diagonal"] == n["diagonal"]


def test_dbar_demo(tmp_path, capsys):
    out = tmp_path / "dbar.json"
    assert main(["dbar-demo", "--K", "5", "--N", "6", "-o", str(out)]) == 0
    assert "formally_holomorphic" in capsys.readouterr().out
    assert json.loads(out.read_text())["classification"] == "formally_holomorphic"


def test_ode1d(capsys, tmp_path):
    assert main(["ode1d", str(FIXTURES / "ode_xcubed.json")]) == 0
    assert json.loads(capsys.readouterr().out) == [{"gamma": [3], "re": "1/6", "im": "0"}]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"order": 2, "trunc_degree": 4, "coeffs": [[]], "data": []}))
    assert main(["ode1d", str(bad)]) == 2


def test_cauchy_demo(capsys, tmp_path):
    csv_path = tmp_path / "u.csv"
    assert main(["cauchy-demo", "--resolution", "64", "--tol", "1e-6", "--csv", str(csv_path), "--grid", "5"]) == 0
    assert "relative error" in capsys.readouterr().out
    assert len(csv_path.read_text().splitlines()) == 26
    assert main(["cauchy-demo", "--resolution", "16", "--tol", "1e-12"]) == 1


def test_bench(capsys):
    assert main(["bench", "--dims", "1", "--degrees", "3", "--repeat", "1"]) == 0
    assert "seconds/product" in capsys.readouterr().out
