import json
import subprocess
import sys

import numpy as np
import pytest

from eigineq.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, EXIT_USAGE, main
from eigineq.matcore import to_json
from eigineq.theorems.registry import NAMES

S2 = np.sqrt(2.0)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def write_matrices(path, *mats):
    path.write_text(json.dumps([to_json(M) for M in mats]))
    return str(path)


def test_list(capsys):
    assert main(["--list"]) == EXIT_OK
    lines = capsys.readouterr().out.split()
    assert lines == list(NAMES) and len(lines) == 23


@pytest.mark.parametrize("argv", [
    ["--suite", "nonexistent"],
    ["--all", "--suite", "thm4_1"],
    [],
    ["--suite", "thm4_1", "--func", "nope"],
    ["--suite", "thm4_1", "--dim-min", "4", "--dim-max", "2"],
    ["--suite", "thm4_1", "--bogus-flag"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_thm4_1_example(capsys):
    code, rep = run_json(capsys, ["--suite", "thm4_1", "--trials", "100", "--dim-min", "2", "--dim-max", "5",
                                  "--seed", "7"])
    assert code == EXIT_OK
    c = rep["checks"][0]
    assert c["check"] == "thm4_1" and c["trials"] == 100 and c["passes"] == 100
    assert rep["status"] == "pass" and rep["schema_version"] == 1
    assert rep["config"]["seed"] == 7 and "maj" in json.dumps(rep["tolerances"])


def test_two_by_two_pair_single_unitary_record(capsys, tmp_path):
    f = write_matrices(tmp_path / "pair.json", np.diag([1.0, 0.0]), np.full((2, 2), 0.5))
    code, rep = run_json(capsys, ["--suite", "thm2_1", "--func", "square", "--matrices", f])
    # the diagnostic is not a gate: the run still passes
    assert code == EXIT_OK
    c = rep["checks"][0]
    assert c["passes"] == 1
    (rec,) = c["diagnostic_records"]
    (comp,) = [x for x in rec["components"] if x["name"] == "single_unitary"]
    expected = (1 - 1 / S2) - (1 - 1 / S2) ** 2  # gap of the second eigenvalues, computed by hand
    assert comp["margin"] == pytest.approx(-expected, abs=1e-12)
    assert comp["margin"] == pytest.approx(-0.20711, abs=1e-5)
    assert comp["worst_k"] == 2
    assert c["outcomes"][0]["status"] == "pass"


def test_matrices_from_separate_files(capsys, tmp_path):
    a = write_matrices(tmp_path / "a.json", np.diag([2.0, 1.0]))
    b = write_matrices(tmp_path / "b.json", np.diag([1.0, 3.0]))
    code, rep = run_json(capsys, ["--suite", "thm4_1", "--matrices", a, "--matrices", b])
    assert code == EXIT_OK and rep["checks"][0]["trials"] == 1


def test_input_errors(capsys, tmp_path):
    missing = str(tmp_path / "missing.json")
    assert main(["--suite", "thm4_1", "--matrices", missing]) == EXIT_INPUT
    assert "missing.json" in capsys.readouterr().err

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--suite", "thm4_1", "--matrices", str(bad)]) == EXIT_INPUT
    assert "bad.json" in capsys.readouterr().err

    nonherm = write_matrices(tmp_path / "nh.json", np.array([[1.0, 2.0], [0.0, 1.0]]), np.eye(2))
    assert main(["--suite", "thm4_1", "--matrices", nonherm]) == EXIT_INPUT
    assert "nh.json" in capsys.readouterr().err

    odd = write_matrices(tmp_path / "odd.json", np.eye(2))
    assert main(["--suite", "thm4_1", "--matrices", odd]) == EXIT_INPUT

    mism = write_matrices(tmp_path / "mism.json", np.eye(2), np.eye(3))
    assert main(["--suite", "thm4_1", "--matrices", mism]) == EXIT_INPUT


def test_thm3_3_exp_example(capsys):
    code, rep = run_json(capsys, ["--suite", "thm3_3", "--func", "exp", "--alpha", "0.5", "--trials", "500"])
    assert code == EXIT_OK
    c = rep["checks"][0]
    assert c["trials"] == 500 and c["passes"] == 500


def test_bk_probe_search_example(capsys):
    code, rep = run_json(capsys, ["--suite", "bk_conjecture_probe", "--search-iters", "10000", "--seed", "1"])
    assert code == EXIT_OK
    (s,) = rep["searches"]
    assert s["check"] == "bk_conjecture_probe" and not s["found"] and s["evaluations"] == 10000


def test_control_search_fails_the_run(capsys):
    code, rep = run_json(capsys, ["--search", "thm3_2", "--func", "control", "--drop-hypotheses",
                                  "--dim-min", "2", "--dim-max", "2", "--search-iters", "500"])
    assert code == EXIT_FAIL
    assert rep["searches"][0]["found"] and rep["status"] == "fail"


def test_hypothesis_mismatch_is_skipped(capsys):
    code, rep = run_json(capsys, ["--suite", "thm3_2", "--func", "control", "--trials", "5"])
    assert code == EXIT_OK
    assert rep["skipped"][0]["check"] == "thm3_2" and not rep["checks"]


def test_csv_output(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["--suite", "rotfeld", "--suite", "cor2_2", "--trials", "20", "--out", str(out)]) == EXIT_OK
    rows = out.read_text().splitlines()
    assert rows[0].startswith("check,trials,passes,fails")
    assert [r.split(",")[0] for r in rows[1:]] == ["rotfeld", "cor2_2"]
    assert all(r.split(",")[2] == "20" for r in rows[1:])


def test_report_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p, workers in zip(paths, ("1", "3")):
        assert main(["--all", "--trials", "15", "--seed", "4", "--workers", workers, "--out", str(p)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rep = json.loads(paths[0].read_text())
    assert len(rep["checks"]) == 23 and rep["totals"]["trials"] == 23 * 15


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "eigineq", "--list"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.split()[0] == NAMES[0]
