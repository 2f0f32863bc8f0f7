import json
import subprocess
import sys

import numpy as np
import pytest

from opeq import matcore as mc
from opeq.cli import main


def write_matrix(path, m):
    path.write_text(json.dumps(mc.matrix_to_json(np.asarray(m, dtype=complex))))
    return str(path)


@pytest.fixture
def rank1_files(tmp_path, rank1_pair):
    a, c = rank1_pair
    return write_matrix(tmp_path / "a.json", a), write_matrix(tmp_path / "c.json", c)


@pytest.fixture
def hermitian_only_files(tmp_path, hermitian_only_pair):
    a, c = hermitian_only_pair
    return write_matrix(tmp_path / "a3.json", a), write_matrix(tmp_path / "c3.json", c)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    payload = json.loads(captured.out) if captured.out.strip() else None
    return code, payload, captured.err


# ---------------------------------------------------------------------------
# solve


def test_solve_positive_fixture(capsys, rank1_files):
    a_file, c_file = rank1_files
    code, payload, _ = run_cli(capsys, "solve", "--a", a_file, "--c", c_file, "--mode", "positive")
    assert code == 0
    x = mc.matrix_from_json(payload["solution"])
    np.testing.assert_allclose(x, np.array([[2, 1], [1, 0.5]]), atol=1e-10)
    assert payload["residual"] < 1e-10


def test_solve_general_default_parameter(capsys, rank1_files):
    a_file, c_file = rank1_files
    code, payload, _ = run_cli(capsys, "solve", "--a", a_file, "--c", c_file)
    assert code == 0
    x = mc.matrix_from_json(payload["solution"])
    np.testing.assert_allclose(x, np.array([[2, 1], [0, 0]]), atol=1e-12)


def test_solve_with_parameter_file(capsys, tmp_path, rank1_files):
    a_file, c_file = rank1_files
    y_file = write_matrix(tmp_path / "y.json", np.array([[9, 9], [1, 1]]))
    code, payload, _ = run_cli(
        capsys, "solve", "--a", a_file, "--c", c_file, "--mode", "general", "--y", y_file
    )
    assert code == 0
    x = mc.matrix_from_json(payload["solution"])
    np.testing.assert_allclose(x, np.array([[2, 1], [1, 1]]), atol=1e-12)


def test_solve_positive_unsolvable_is_exit_two(capsys, hermitian_only_files):
    a_file, c_file = hermitian_only_files
    code, payload, _ = run_cli(
        capsys, "solve", "--a", a_file, "--c", c_file, "--mode", "positive"
    )
    assert code == 2
    assert payload["status"] == "unsolvable"
    assert payload["report"]["dp_range_eq"] is False
    assert "dp_range_eq" in payload["certificate"]["failed_conditions"]


def test_solve_hermitian_fixture(capsys, rank1_files):
    a_file, c_file = rank1_files
    code, payload, _ = run_cli(
        capsys, "solve", "--a", a_file, "--c", c_file, "--mode", "hermitian"
    )
    assert code == 0
    x = mc.matrix_from_json(payload["solution"])
    np.testing.assert_allclose(x, np.array([[2, 1], [1, 0]]), atol=1e-12)


def test_solve_wrong_parameter_flag(capsys, rank1_files):
    a_file, c_file = rank1_files
    code, _, err = run_cli(
        capsys, "solve", "--a", a_file, "--c", c_file, "--mode", "positive", "--y", a_file
    )
    assert code == 1 and "error" in err


def test_solve_non_psd_parameter_is_input_error(capsys, tmp_path, rank1_files):
    a_file, c_file = rank1_files
    z_file = write_matrix(tmp_path / "z.json", -np.eye(2))
    code, _, err = run_cli(
        capsys, "solve", "--a", a_file, "--c", c_file, "--mode", "positive", "--z", z_file
    )
    assert code == 1 and "error" in err


# ---------------------------------------------------------------------------
# check and majorize


def test_check_fixture(capsys, rank1_files):
    code, payload, _ = run_cli(capsys, "check", "--a", rank1_files[0], "--c", rank1_files[1])
    assert code == 0
    assert payload["verdict"] == "SolvablePositive"
    assert payload["t_min"] == pytest.approx(2.5, rel=1e-9)


def test_check_hermitian_only(capsys, hermitian_only_files):
    code, payload, _ = run_cli(
        capsys, "check", "--a", hermitian_only_files[0], "--c", hermitian_only_files[1]
    )
    assert code == 0
    assert payload["verdict"] == "SolvableHermitian"
    assert payload["lambda_estimate"] == "inf"
    assert payload["t_min"] == "inf"


def test_check_zero_target(capsys, tmp_path):
    a_file = write_matrix(tmp_path / "a.json", np.eye(2))
    c_file = write_matrix(tmp_path / "c.json", np.zeros((2, 2)))
    code, payload, _ = run_cli(capsys, "check", "--a", a_file, "--c", c_file)
    assert code == 0
    assert payload["verdict"] == "SolvablePositive"
    assert payload["t_min"] == 0.0


def test_majorize_fixture(capsys, rank1_files):
    code, payload, _ = run_cli(capsys, "majorize", "--a", rank1_files[0], "--c", rank1_files[1])
    assert code == 0
    assert payload["finite"] is True
    assert payload["mu_star"] == pytest.approx(5.0, rel=1e-10)
    assert payload["d_norm_sq"] == pytest.approx(5.0, rel=1e-10)
    assert payload["range_inclusion"] is True


def test_majorize_self(capsys, tmp_path):
    a_file = write_matrix(tmp_path / "a.json", np.diag([1.0, 2.0]))
    code, payload, _ = run_cli(capsys, "majorize", "--a", a_file, "--c", a_file)
    assert code == 0 and payload["mu_star"] == pytest.approx(1.0, rel=1e-10)


def test_majorize_disjoint(capsys, tmp_path):
    a_file = write_matrix(tmp_path / "a.json", np.diag([0.0, 1.0]))
    c_file = write_matrix(tmp_path / "c.json", np.diag([1.0, 0.0]))
    code, payload, _ = run_cli(capsys, "majorize", "--a", a_file, "--c", c_file)
    assert code == 0
    assert payload["finite"] is False and payload["mu_star"] == "inf"
    assert payload["d_norm_sq"] is None


# ---------------------------------------------------------------------------
# grid commands


def test_twoproj(capsys, tmp_path):
    csv_path = tmp_path / "curve.csv"
    code, payload, _ = run_cli(capsys, "twoproj", "--n", "1000", "--csv", str(csv_path))
    assert code == 0
    assert payload["gap"] == pytest.approx(0.707, abs=5e-3)
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "t,re11,im11,re12,im12,re21,im21,re22,im22"
    assert len(lines) == 1000
    last = lines[-1].split(",")
    assert float(last[0]) == 1.0
    assert float(last[1]) == pytest.approx(1.0, abs=1e-8)
    assert float(last[5]) == pytest.approx(0.0, abs=1e-8)


def test_twoproj_rejects_small_grid(capsys):
    code, _, err = run_cli(capsys, "twoproj", "--n", "50")
    assert code == 1 and "error" in err


def test_perturb(capsys):
    code, payload, _ = run_cli(capsys, "perturb", "--n", "1000", "--eps", "0.1")
    assert code == 0
    assert payload["distance"] == pytest.approx(0.1564, abs=0.01)
    assert payload["residual_max"] < 1e-8
    assert payload["algebra_membership"] is True
    assert 0.0 < payload["eps_snapped"] < 1.0


def test_perturb_monotone_distance(capsys):
    dists = []
    for eps in ("0.2", "0.1", "0.05"):
        code, payload, _ = run_cli(capsys, "perturb", "--n", "1000", "--eps", eps)
        assert code == 0
        dists.append(payload["distance"])
    assert dists[0] > dists[1] > dists[2]


def test_perturb_bad_eps(capsys):
    code, _, err = run_cli(capsys, "perturb", "--n", "1000", "--eps", "1.5")
    assert code == 1 and "error" in err


def test_perturb_csv_outputs(capsys, tmp_path):
    x_csv = tmp_path / "x.csv"
    q_csv = tmp_path / "q.csv"
    code, _, _ = run_cli(
        capsys,
        "perturb", "--n", "200", "--eps", "0.2",
        "--csv-x", str(x_csv), "--csv-q", str(q_csv),
    )
    assert code == 0
    for path in (x_csv, q_csv):
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,re11,im11,re12,im12,re21,im21,re22,im22"
        assert len(lines) == 201


# ---------------------------------------------------------------------------
# verify


def test_verify_small(capsys):
    code, payload, _ = run_cli(capsys, "verify", "--trials", "5", "--seed", "9")
    assert code == 0
    assert payload["violations"] == 0
    assert payload["seed"] == 9


def test_verify_deterministic_bytes(capsys):
    args = ["verify", "--trials", "5", "--seed", "41"]
    code1 = main(args)
    out1 = capsys.readouterr().out
    code2 = main(args)
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


# ---------------------------------------------------------------------------
# error handling and plumbing


def test_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "check", "--a", str(tmp_path / "no.json"), "--c", str(tmp_path / "no.json"))
    assert code == 1 and "error" in err


def test_bad_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _, err = run_cli(capsys, "check", "--a", str(bad), "--c", str(bad))
    assert code == 1 and "error" in err


def test_nan_entries_rejected(capsys, tmp_path):
    bad = tmp_path / "nan.json"
    bad.write_text('{"rows": 1, "cols": 1, "data": [[NaN, 0.0]]}')
    code, _, err = run_cli(capsys, "check", "--a", str(bad), "--c", str(bad))
    assert code == 1 and "error" in err


def test_shape_mismatch_exit(capsys, tmp_path):
    a_file = write_matrix(tmp_path / "a.json", np.eye(2))
    c_file = write_matrix(tmp_path / "c.json", np.eye(3))
    code, _, err = run_cli(capsys, "check", "--a", a_file, "--c", c_file)
    assert code == 1 and "error" in err


def test_unknown_flag(capsys, rank1_files):
    code, _, _ = run_cli(capsys, "check", "--a", rank1_files[0], "--c", rank1_files[1], "--frobnicate")
    assert code == 1


def test_bad_tolerance_override(capsys, rank1_files):
    code, _, err = run_cli(
        capsys, "check", "--a", rank1_files[0], "--c", rank1_files[1], "--rank-rtol", "2.0"
    )
    assert code == 1 and "error" in err


def test_out_file(capsys, tmp_path, rank1_files):
    out = tmp_path / "report.json"
    code, payload, _ = run_cli(
        capsys, "check", "--a", rank1_files[0], "--c", rank1_files[1], "--out", str(out)
    )
    assert code == 0 and payload is None
    report = json.loads(out.read_text())
    assert report["verdict"] == "SolvablePositive"


def test_console_entry_point(tmp_path, rank1_pair):
    a, c = rank1_pair
    a_file = write_matrix(tmp_path / "a.json", a)
    c_file = write_matrix(tmp_path / "c.json", c)
    proc = subprocess.run(
        [sys.executable, "-m", "opeq.cli", "check", "--a", a_file, "--c", c_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "SolvablePositive"
