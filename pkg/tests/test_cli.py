import csv
import io
import json

import numpy as np
import pytest

from krein_riccati.cli import main
from krein_riccati.dense import matrix_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


SCALAR = {"A": [[0]], "B": [[1]], "C": [[1]]}


def test_analyze_modal_model_passes(capsys):
    code, out = run(capsys, "analyze", "--model", '{"model": "diag8_1", "kmax": 3}')
    rep = json.loads(out)
    assert code == 0
    for key in ("j1_skew_residual", "j2_min_eig", "symmetry_violations", "gap_ok", "strip_ok",
                "imaginary_kernel_violations", "r0_table", "subordination"):
        assert key in rep
    assert rep["gap_ok"] and rep["symmetry_violations"] == []
    assert rep["subordination"]["0.5000"] == pytest.approx(1.0)


def test_analyze_non_hermitian_exit_3(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"A": [[0, 0], [0, 0]], "B": [[1, 1], [0, 1]], "C": [[1, 0], [0, 1]]})
    code, out = run(capsys, "analyze", "--input", path)
    assert code == 3 and json.loads(out)["error"] == "NotHermitianError"


def test_analyze_structural_check_failure_exit_3(capsys):
    # semidefinite data with an imaginary eigenvalue of A killed by C
    spec = {"model": "matrices", "A": matrix_to_json([[1j]]), "B": matrix_to_json([[1]]),
            "C": matrix_to_json([[0]])}
    code, out = run(capsys, "analyze", "--model", json.dumps(spec))
    rep = json.loads(out)
    assert code == 3 and rep["imaginary_kernel_violations"] == [1.0]


def test_parse_errors_exit_2(tmp_path, capsys):
    assert run(capsys, "analyze", "--input", write(tmp_path, "e.json", ""))[0] == 2
    assert run(capsys, "analyze", "--input", write(tmp_path, "j.json", "{nope"))[0] == 2
    assert run(capsys, "analyze", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "analyze", "--input", write(tmp_path, "k.json", {"A": [[0]]}))[0] == 2
    assert run(capsys, "analyze")[0] == 2
    assert run(capsys, "analyze", "--model", '{"model": "nope"}')[0] == 2
    code, out = run(capsys, "analyze", "--model", '{"model": "random"}', "--tol", "bogus=1")
    assert code == 2 and "bogus" in json.loads(out)["message"]
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_enumerate_scalar_csv(tmp_path, capsys):
    code, out = run(capsys, "enumerate", "--input", write(tmp_path, "s.json", SCALAR), "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert list(rows[0]) == ["scset_id", "residual", "min_eig", "max_eig", "order_ok", "proj_ok", "cl_match"]
    assert sorted(float(r["min_eig"]) for r in rows) == pytest.approx([-1.0, 1.0])


def test_enumerate_random_and_modal(capsys):
    code, out = run(capsys, "enumerate", "--model", '{"model": "random", "n": 2, "seed": 4}')
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 4
    assert all(r["order_ok"] and r["proj_ok"] and r["cl_match"] for r in rep["rows"])
    code, out = run(capsys, "enumerate", "--model", '{"model": "diag8_1", "kmax": 2}')
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 4
    mixed = [r for r in rep["rows"] if r["scset_id"] in ("+-", "-+")]
    assert all(r["definiteness"] == "INDEFINITE" for r in mixed)


def test_enumerate_certificate_failure_exit_4(capsys):
    # a negative slack demands strict order, which X = X+ itself violates
    code, out = run(capsys, "enumerate", "--model", '{"model": "random", "n": 2, "seed": 4}',
                    "--tol", "order_tol=-1e-3")
    assert code == 4 and json.loads(out)["certificate_failures"]


def test_enumerate_unusable_rows(capsys):
    spec = {"model": "matrices", "A": matrix_to_json([[2j]]), "B": matrix_to_json([[1]]),
            "C": matrix_to_json([[0]])}
    code, out = run(capsys, "enumerate", "--model", json.dumps(spec))
    rep = json.loads(out)
    assert code == 0 and not rep["canonical_pair"] and rep["rows"][0]["status"] == "OK"


def test_solve_and_verify_round_trip(tmp_path, capsys):
    model = '{"model": "random", "n": 3, "seed": 1}'
    code, out = run(capsys, "solve", "--model", model)
    assert code == 0
    xp = json.loads(out)["X_plus"]["X"]
    code, out = run(capsys, "verify", "--model", model, "--x", write(tmp_path, "x.json", {"X": xp}))
    rep = json.loads(out)
    assert code == 0 and all(rep["checks"].values())
    rows = {"re": rep["P"]["re"], "im": rep["P"]["im"]}
    p = (np.array(rows["re"]) + 1j * np.array(rows["im"])).reshape(3, 3)
    assert np.allclose(p, np.eye(3), atol=1e-8)


def test_verify_mixed_solution_from_enumerate(tmp_path, capsys):
    model = '{"model": "random", "n": 2, "seed": 9}'
    _, out = run(capsys, "enumerate", "--model", model)
    row = next(r for r in json.loads(out)["rows"] if r["scset_id"] == "+-")
    code, out = run(capsys, "verify", "--model", model, "--x", write(tmp_path, "x.json", {"X": row["X"]}))
    assert code == 0 and all(json.loads(out)["checks"].values())


def test_verify_non_solution_exit_4(tmp_path, capsys):
    model = '{"model": "random", "n": 3, "seed": 1}'
    path = write(tmp_path, "x.json", {"X": [[1, 0, 0], [0, 2, 0], [0, 0, 3]]})
    code, out = run(capsys, "verify", "--model", model, "--x", path)
    assert code == 4 and not json.loads(out)["checks"]["residual"]
    path = write(tmp_path, "y.json", {"X": [[1, 1, 0], [0, 2, 0], [0, 0, 3]]})
    assert run(capsys, "verify", "--model", model, "--x", path)[0] == 3
    assert run(capsys, "verify", "--model", model)[0] == 2


def test_modal_and_examples(capsys):
    code, out = run(capsys, "modal", "--model", '{"model": "diag8_1", "kmax": 16}', "--signs", "alt")
    rep = json.loads(out)
    assert code == 0 and rep["growth"]["verdict"] == "UNBOUNDED"
    assert rep["dichotomy"][3]["cos_theta"] == pytest.approx(0.6)
    assert run(capsys, "modal", "--model", '{"model": "random"}')[0] == 2
    code, out = run(capsys, "examples")
    assert code == 0 and json.loads(out)["fourier8_3"]["1.0"]["X_plus_error"] <= 1e-9


def test_reports_deterministic_and_seed_echoed(tmp_path, capsys):
    model = '{"model": "diag8_1", "kmax": 8}'
    args = ["enumerate", "--model", model, "--scset-limit", "10", "--seed", "5"]
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b and json.loads(a)["seed"] == 5 and json.loads(a)["count"] == 10
    out = tmp_path / "r.json"
    assert main(args + ["--output", str(out)]) == 0
    assert out.read_text() == a


def test_threads_env_gives_same_report(capsys, monkeypatch):
    args = ["enumerate", "--model", '{"model": "random", "n": 3, "seed": 2}']
    serial = run(capsys, *args)[1]
    monkeypatch.setenv("KREIN_RICCATI_THREADS", "4")
    assert run(capsys, *args)[1] == serial
