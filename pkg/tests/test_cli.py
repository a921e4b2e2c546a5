import json
import os
import subprocess
import sys

import numpy as np
import pytest

from axlab import Matrix, TruncSeries, jsonio
from axlab.cli import run
from axlab.eigencoords import eigencoordinates
from axlab.matdata import exp_data, matrix_data
from axlab.triexp import tri_exp
from helpers import triangular_instance


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(tmp_path, argv):
    out = tmp_path / "out.json"
    code = run(argv + ["--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


@pytest.fixture
def two_by_two(tmp_path):
    x = TruncSeries.var(0, 1, 5)
    A = Matrix([[x, x.scale(2)], [x.zero(), -x]])
    return A, _write(tmp_path / "A.json", jsonio.matrix_to_json(A))


def test_exp_closed_form(tmp_path, two_by_two):
    A, path = two_by_two
    code, out = _run(tmp_path, ["exp", "--in", path])
    assert code == 0 and out["method"] == "tri" and out["closed_form_2x2"] is True
    assert jsonio.matrix_from_json(out) == tri_exp(A)


def test_exp_numeric(tmp_path):
    path = _write(tmp_path / "R.json", {"entries": [["1", "1"], ["0", "1"]]})
    code, out = _run(tmp_path, ["exp", "--in", path])
    assert code == 0 and out["method"] == "numeric"
    assert abs(float(out["entries"][0][1]["re"]) - 2.718281828459045) < 1e-12


def test_eig_zero_and_back(tmp_path):
    zero = {"vars": 1, "order": 3, "terms": {}}
    path = _write(tmp_path / "Z.json", {"entries": [[zero] * 3 for _ in range(3)]})
    code, out = _run(tmp_path, ["eig", "--in", path])
    assert code == 0
    assert all(e["value"]["num"]["terms"] == {} for e in out["entries"])
    back = _write(tmp_path / "ec.json", out)
    code, mat = _run(tmp_path, ["eig", "--in", back])
    assert code == 0 and jsonio.matrix_from_json(mat).is_zero()


def test_eig_matches_library(tmp_path):
    rng = np.random.default_rng(0)
    A = triangular_instance(rng, (2, 1), m=2, D=5)
    path = _write(tmp_path / "A.json", jsonio.matrix_to_json(A))
    code, out = _run(tmp_path, ["eig", "--in", path])
    assert jsonio.eigencoords_from_json(out) == eigencoordinates(A)


def test_data_and_exp_data(tmp_path):
    rng = np.random.default_rng(1)
    A = triangular_instance(rng, (2, 1), m=1, D=8, shuffle=False)
    path = _write(tmp_path / "A.json", jsonio.matrix_to_json(A))
    code, d = _run(tmp_path, ["data", "--in", path])
    assert code == 0 and d["m"] == [2, 1]
    dpath = _write(tmp_path / "d.json", d)
    code, de = _run(tmp_path, ["data", "--in", dpath, "--exp"])
    assert jsonio.data_from_json(de) == exp_data(matrix_data(A))
    code, de2 = _run(tmp_path, ["data", "--in", path, "--exp"])
    assert jsonio.data_from_json(de2) == jsonio.data_from_json(de)


def test_check_harness_deterministic(tmp_path):
    argv = ["check", "--flavor", "h", "--n", "2", "--m", "2", "--trunc", "8", "--deg", "3",
            "--trials", "6", "--seed", "42"]
    code, a = _run(tmp_path, argv)
    assert code == 0 and a["summary"] == {"PASS": 6, "WARN": 0}
    assert [r["trial"] for r in a["reports"]] == list(range(6))
    code, b = _run(tmp_path, argv)
    assert a == b


def test_check_threads_identical(tmp_path):
    argv = [sys.executable, "-m", "axlab", "check", "--flavor", "gl", "--n", "2", "--m", "1",
            "--trunc", "6", "--trials", "4", "--seed", "3"]
    one = subprocess.run(argv, capture_output=True, text=True, env={**os.environ, "AXLAB_THREADS": "1"})
    two = subprocess.run(argv, capture_output=True, text=True, env={**os.environ, "AXLAB_THREADS": "2"})
    assert one.returncode == 0 and one.stdout == two.stdout


def test_check_family_file(tmp_path):
    from axlab.checker import tight_family
    path = _write(tmp_path / "fam.json", jsonio.family_to_json(tight_family("classical")))
    code, out = _run(tmp_path, ["check", "--in", path, "--exhaustive"])
    assert code == 0 and (out["N"], out["rankJ"], out["trdeg"]) == (1, 1, 2)


def test_full_builtin(tmp_path):
    code, out = _run(tmp_path, ["full", "--builtin", "all"])
    assert code == 0 and [r["verdict"] for r in out["reports"]] == ["PASS"] * 3
    code, _ = _run(tmp_path, ["full", "--builtin", "nope"])
    assert code == 2


def test_special_commands(tmp_path):
    code, A = _run(tmp_path, ["special", "sample", "--builtin", "example1", "--values", "s=2"])
    assert code == 0
    path = _write(tmp_path / "S.json", A)
    code, res = _run(tmp_path, ["special", "member", "--builtin", "example1", "--in", path])
    assert code == 0 and res["member"] is True
    code, res = _run(tmp_path, ["special", "member", "--builtin", "example2", "--in", path])
    assert code == 1 and res["witness"] == "sigma: f1 - f3 = 0"
    spec = tmp_path / "ws.json"
    from axlab.special import diagonal_family
    spec.write_text(json.dumps(diagonal_family(2, [[1, -1]]).to_json()))
    code, rep = _run(tmp_path, ["special", "image-check", "--spec", str(spec), "--deg", "1",
                                "--seed", "0"])
    assert code == 0 and len(rep["relations"]) == 1


def test_usage_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"entries": [["1"]\n "x"]}')
    assert run(["exp", "--in", str(bad)]) == 2
    assert "bad.json:2:2" in capsys.readouterr().err
    assert run(["eig", "--in", str(tmp_path / "missing.json")]) == 2
    assert run(["check", "--n", "2"]) == 2
    assert run(["check", "--n", "9", "--seed", "1"]) == 2
    assert run(["special", "sample", "--builtin", "example1"]) == 2
    assert run(["bogus"]) == 2


def test_exp_rejects_constant_terms(tmp_path, two_by_two):
    A, path = two_by_two
    code, E = _run(tmp_path, ["exp", "--in", path])
    epath = _write(tmp_path / "E.json", E)
    assert run(["exp", "--in", epath]) == 2
