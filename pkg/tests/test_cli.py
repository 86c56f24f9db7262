import json

import numpy as np
import pytest

from einselect import STATE_1, VerificationOutcome, make_x_state, write_matrix_file
from einselect.cli import main

STATE_FLAG = "0.4,0.1,0.1,0.4"


def state_file(tmp_path, std=None):
    path = tmp_path / "state.mat"
    write_matrix_file(path, make_x_state(STATE_1), std=std)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_sweep_csv_contract(capsys):
    code, out, err = run(capsys, "sweep", "--state", STATE_FLAG, "--grid", "11")
    assert code == 0
    assert err == ""
    lines = out.strip().split("\n")
    assert lines[0] == "p,j_z,j_x,j_max,opt_theta,opt_phi,mutual_info,discord"
    assert len(lines) == 12
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(0.278072, abs=1e-6)
    assert float(first[3]) == pytest.approx(1.0, abs=1e-6)


def test_sweep_json_carries_trajectory_metadata(capsys):
    code, out, _ = run(
        capsys, "sweep", "--state", STATE_FLAG, "--grid", "11", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["regime"] == "decay-then-constant"
    assert payload["transition_p"] == pytest.approx(0.4, abs=1e-9)
    assert payload["emergence_time"] == pytest.approx(0.510826, abs=1e-6)
    assert len(payload["records"]) == 11


def test_sweep_writes_output_file(capsys, tmp_path):
    out_path = tmp_path / "run.csv"
    code, out, _ = run(
        capsys, "sweep", "--state", STATE_FLAG, "--grid", "5", "--out", str(out_path)
    )
    assert code == 0
    assert out == ""
    assert out_path.read_text().startswith("p,j_z,")


def test_sweep_accepts_matrix_file(capsys, tmp_path):
    code, out, _ = run(
        capsys, "sweep", "--matrix-file", state_file(tmp_path), "--grid", "5"
    )
    assert code == 0
    assert len(out.strip().split("\n")) == 6


def test_sweep_pointer_channel_flags(capsys):
    code, out, _ = run(
        capsys, "sweep", "--state", STATE_FLAG, "--grid", "5",
        "--channel", "pointer", "--theta", "1.5707963267948966", "--phi", "0",
    )
    assert code == 0
    assert out.startswith("p,")


def test_emergence_json(capsys):
    code, out, _ = run(capsys, "emergence", "--state", STATE_FLAG, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["transition"] is True
    assert payload["tau_e"] == pytest.approx(np.log(5.0 / 3.0), abs=1e-12)
    assert payload["p_e"] == pytest.approx(0.4, abs=1e-12)
    assert payload["tau_d"] == 1.0


def test_emergence_csv_and_gamma(capsys):
    code, out, _ = run(capsys, "emergence", "--state", STATE_FLAG, "--gamma", "2.0")
    assert code == 0
    header, row = out.strip().split("\n")
    assert header == "gamma,tau_d,tau_e,p_e,p_at_tau_d,transition"
    cells = row.split(",")
    assert float(cells[1]) == 0.5
    assert float(cells[2]) == pytest.approx(np.log(5.0 / 3.0) / 2.0, abs=1e-9)
    assert cells[5] == "true"


def test_emergence_without_transition_emits_nulls(capsys):
    code, out, _ = run(
        capsys, "emergence", "--state", "0.4,0.1,0.0,0.05", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["transition"] is False
    assert payload["tau_e"] is None
    assert payload["p_e"] is None


def test_emergence_rejects_non_x_states(capsys, tmp_path):
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = a @ a.conj().T
    path = tmp_path / "generic.mat"
    write_matrix_file(path, m / m.trace().real)
    code, _, err = run(capsys, "emergence", "--matrix-file", str(path))
    assert code == 1
    assert "X-form" in err


def test_maximize_outputs(capsys):
    code, out, _ = run(
        capsys, "maximize", "--state", "0.4,0.1,0.1,0.15", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["j_z"] == pytest.approx(0.278072, abs=1e-6)
    assert payload["j_x"] == pytest.approx(0.188722, abs=1e-6)
    assert payload["j_max"] == pytest.approx(0.278072, abs=1e-6)
    assert payload["discord"] == pytest.approx(0.283169, abs=1e-6)

    code, out, _ = run(capsys, "maximize", "--state", "0.4,0.1,0.1,0.15")
    header, row = out.strip().split("\n")
    assert header == "j_z,j_x,j_max,opt_theta,opt_phi,mutual_info,discord"
    assert len(row.split(",")) == 7


def test_verify_single_suite_json(capsys):
    code, out, _ = run(
        capsys, "verify", "--suite", "remark", "--grid", "21", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["theorem_id"] == "remark"
    assert payload["passed"] is True


def test_verify_csv_rows(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "theorem1", "--trials", "30")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "theorem_id,trials,failures,worst_violation,seed"
    assert lines[1].startswith("theorem1,30,0,")


def test_verify_failure_exit_code(capsys, monkeypatch):
    failing = VerificationOutcome("theorem1", 5, 2, 0.3, 42)
    monkeypatch.setattr("einselect.cli.verify_theorem1", lambda **kw: failing)
    code, out, _ = run(capsys, "verify", "--suite", "theorem1")
    assert code == 3
    assert "theorem1,5,2," in out


def test_analyze_point_estimate(capsys, tmp_path):
    code, out, _ = run(
        capsys, "analyze", "--matrix-file", state_file(tmp_path),
        "--grid", "11", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["bands"] is None
    assert payload["report"]["transition_p"] == pytest.approx(0.4, abs=1e-6)
    assert payload["deviations"]["projection_distance"] < 1e-12


def test_analyze_with_monte_carlo_bands(capsys, tmp_path):
    path = state_file(tmp_path, std=np.full((4, 4), 0.005))
    code, out, _ = run(
        capsys, "analyze", "--matrix-file", path,
        "--grid", "11", "--samples", "3", "--seed", "5", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["bands"]["samples"] == 3
    assert payload["bands"]["transition_count"] == 3
    assert len(payload["bands"]["p"]) == 11


def test_analyze_csv_is_the_trajectory_table(capsys, tmp_path):
    code, out, _ = run(
        capsys, "analyze", "--matrix-file", state_file(tmp_path), "--grid", "5"
    )
    assert code == 0
    assert out.startswith("p,j_z,")


def test_analyze_rejects_unphysical_data(capsys, tmp_path):
    path = tmp_path / "junk.mat"
    raw = np.diag([-0.5, 0.95, 0.3, 0.25]).astype(complex)
    write_matrix_file(path, raw)
    code, _, err = run(capsys, "analyze", "--matrix-file", str(path), "--grid", "5")
    assert code == 2
    assert "data quality" in err


def test_missing_matrix_file_is_invalid_input(capsys):
    code, _, err = run(capsys, "analyze", "--matrix-file", "/nonexistent.mat")
    assert code == 1
    assert "cannot read" in err


@pytest.mark.parametrize(
    "argv,fragment",
    [
        (("sweep",), "required"),
        (("sweep", "--state", "0.4,0.1,0.1"), "four comma-separated"),
        (("sweep", "--state", "a,b,c,d"), "non-number"),
        (("sweep", "--state", "0.4,0.1,0.9,0.4"), "positivity"),
        (("sweep", "--state", STATE_FLAG, "--grid", "1"), "at least 2"),
        (("sweep", "--state", STATE_FLAG, "--channel", "bogus"), "invalid choice"),
        (("verify", "--suite", "bogus"), "invalid choice"),
        (("bogus-command",), "invalid choice"),
    ],
)
def test_usage_errors_exit_one(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert fragment in err


def test_state_and_matrix_file_are_exclusive(capsys, tmp_path):
    code, _, err = run(
        capsys, "sweep", "--state", STATE_FLAG, "--matrix-file", state_file(tmp_path)
    )
    assert code == 1
    assert "not both" in err


def test_repeated_runs_are_byte_identical(tmp_path, capsys):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    for path in (first, second):
        code, _, _ = run(
            capsys, "sweep", "--state", STATE_FLAG, "--grid", "11", "--out", str(path)
        )
        assert code == 0
    assert first.read_bytes() == second.read_bytes()
