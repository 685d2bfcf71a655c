import csv
import json

import numpy as np
import pytest

from cvbound.cli import main
from cvbound.states import state_from_dict


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_writes_state_json(tmp_path, capsys):
    out = tmp_path / "state.json"
    code, _, _ = run(capsys, "build", "--pairs", "2", "--r", "1", "--sigma", "1", "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert data["n_modes"] == 4
    assert len(data["cov"]) == 8 and len(data["cov"][0]) == 8
    state = state_from_dict(data)
    assert state.cov[0, 0] == pytest.approx(np.cosh(2.0) / 2 + 1.0, abs=1e-10)


def test_build_three_pairs(tmp_path, capsys):
    out = tmp_path / "state.json"
    code, _, _ = run(capsys, "build", "--pairs", "3", "--r", "1", "--sigma", "1", "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["cov"]) == 12


def test_build_round_trip_bit_identical(tmp_path, capsys):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "build", "--r", "0.7", "--sigma", "2", "--out", str(out1))
    run(capsys, "build", "--r", "0.7", "--sigma", "2", "--out", str(out2))
    assert out1.read_text() == out2.read_text()
    # read-back reproduces the constructed covariance bit for bit
    from cvbound.factory import BoundStateSpec, smolin_cv_2n

    state = state_from_dict(json.loads(out1.read_text()))
    built = smolin_cv_2n(BoundStateSpec(2, 0.7, 2.0, 2.0))
    assert np.array_equal(state.cov, built.cov)


def test_build_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"n_pairs": 2, "r": 2.0, "sigma_x": 3.0, "sigma_p": 3.0}))
    code, out, _ = run(capsys, "build", "--config", str(cfg), "--r", "1.0")
    assert code == 0
    data = json.loads(out)
    assert data["cov"][0][0] == pytest.approx(np.cosh(2.0) / 2 + 9.0, abs=1e-9)


def test_build_bad_output_path(capsys):
    code, _, err = run(capsys, "build", "--out", "/nonexistent-dir/state.json")
    assert code == 2
    assert "error" in err


def test_nullifiers_report(capsys):
    code, out, _ = run(capsys, "nullifiers", "--r", "1", "--sigma", "5")
    assert code == 0
    data = json.loads(out)
    expected = 2 * np.exp(-2.0)
    assert data["x_sum_nullifier"]["variance"] == pytest.approx(expected, rel=1e-9)
    assert data["p_alternating_nullifier"]["variance"] == pytest.approx(expected, rel=1e-9)
    tables = data["partition_commutation"]
    assert tables["12-34"]["all_local_commuting"] is True
    assert tables["14-23"]["all_local_commuting"] is True
    assert tables["13-24"]["all_local_commuting"] is False


def test_sep_check_verdicts(capsys):
    code, out, _ = run(capsys, "sep-check", "--r", "1", "--sigma", "1", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    rows = {row["bipartition"]: row for row in payload["rows"]}
    assert rows["13-24"]["verdict"] == "entangled"
    assert rows["13-24"]["nu_min"] < 0.5
    assert "separable" in rows["12-34"]["verdict"]
    assert rows["12-34"]["nu_min"] >= 0.5 - 1e-9
    # measured transition reported beside the analytic floor, no equality claimed
    assert payload["ppt_transition_sigma_14_23"] == pytest.approx(
        np.sqrt(np.sinh(2.0) / 4), abs=1e-4
    )
    assert payload["duan_noise_floor_sigma"] == pytest.approx(0.65752, abs=1e-4)


def test_sep_check_r_zero_all_ppt(capsys):
    code, out, _ = run(capsys, "sep-check", "--r", "0", "--sigma", "1", "--format", "json")
    assert code == 0
    for row in json.loads(out)["rows"]:
        assert row["nu_min"] >= 0.5 - 1e-9
        assert row["verdict"] != "entangled"


def test_sep_check_from_state_file(tmp_path, capsys):
    path = tmp_path / "state.json"
    run(capsys, "build", "--r", "1", "--sigma", "1", "--out", str(path))
    code, out, _ = run(capsys, "sep-check", "--state", str(path), "--format", "json")
    assert code == 0
    rows = {row["bipartition"]: row for row in json.loads(out)["rows"]}
    assert rows["13-24"]["verdict"] == "entangled"
    # without construction knowledge PPT stays uncertified
    assert rows["12-34"]["verdict"] == "PPT (separability not certified)"


def test_sep_check_malformed_state_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code, _, err = run(capsys, "sep-check", "--state", str(path))
    assert code == 2 and "error" in err
    path.write_text(json.dumps({"n_modes": 4, "mean": [0.0] * 8, "cov": [[0.5]]}))
    code, _, err = run(capsys, "sep-check", "--state", str(path))
    assert code == 2


def test_unlock_command(capsys):
    code, out, _ = run(capsys, "unlock", "--pair", "3,4", "--r", "1", "--sigma", "1")
    assert code == 0
    data = json.loads(out)
    assert data["survivors"] == [1, 2]
    assert data["witness_sum_x"] == pytest.approx(2 * np.exp(-2.0), rel=1e-9)
    assert data["entangled"] is True
    assert data["params"]["measured_pair"] == [3, 4]


def test_unlock_forbidden_pair(capsys):
    code, out, _ = run(capsys, "unlock", "--pair", "2,4", "--r", "1", "--sigma", "1")
    assert code == 0
    data = json.loads(out)
    assert data["entangled"] is False
    assert data["duan"] >= 2.0


def test_unlock_bad_pair_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["unlock", "--pair", "5,1"])
    assert err.value.code == 2


def test_superactivate_command(capsys):
    code, out, _ = run(capsys, "superactivate", "--r", "1", "--sigma", "1")
    assert code == 0
    data = json.loads(out)
    assert data["witness_sum_x"] == pytest.approx(4 * np.exp(-2.0), rel=1e-9)
    assert data["witness_diff_p"] == pytest.approx(4 * np.exp(-2.0), rel=1e-9)
    assert data["duan"] == pytest.approx(8 * np.exp(-2.0), rel=1e-9)
    assert data["entangled"] is True


def test_sweep_row_count_and_schema(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(
        capsys,
        "sweep",
        "--grid-r",
        "0.5:2:0.75",
        "--grid-sigma",
        "0:2:0.05",
        "--bipartition",
        "14-23",
        "--out",
        str(out),
    )
    assert code == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    assert header == ["r", "sigma", "bipartition", "nu_min", "log_neg", "duan", "verdict", "duan_threshold_sigma_sq"]
    assert len(body) == 3 * 41  # 123 grid points
    at_r1 = [row for row in body if row[0] == "1.25"]
    assert len(at_r1) == 41


def test_sweep_eq_threshold_column_constant_in_sigma(capsys):
    code, out, _ = run(capsys, "sweep", "--grid-r", "1", "--grid-sigma", "0:1:0.5", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    expected = (1 - np.exp(-2.0)) / 2
    assert all(row["duan_threshold_sigma_sq"] == pytest.approx(expected, rel=1e-9) for row in rows)


def test_sweep_13_24_npt_everywhere(capsys):
    code, out, _ = run(
        capsys, "sweep", "--grid-r", "0.5:2:0.5", "--grid-sigma", "0:10:2.5",
        "--bipartition", "13-24", "--format", "json",
    )
    assert code == 0
    for row in json.loads(out):
        assert row["nu_min"] < 0.5
        assert row["verdict"] == "entangled"


def test_sweep_parallel_matches_serial(tmp_path, capsys):
    args = ["sweep", "--grid-r", "0.5:1.5:0.5", "--grid-sigma", "0:1:0.25"]
    serial = tmp_path / "serial.csv"
    parallel = tmp_path / "parallel.csv"
    run(capsys, *args, "--out", str(serial))
    run(capsys, *args, "--jobs", "3", "--out", str(parallel))
    assert serial.read_text() == parallel.read_text()


def test_sweep_empty_grid_exits_1(capsys):
    code, _, err = run(capsys, "sweep", "--grid-r", "2:1:0.5", "--grid-sigma", "0:1:0.5")
    assert code == 1 and "empty" in err
    with pytest.raises(SystemExit) as err:
        main(["sweep", "--grid-r", "1:2:0", "--grid-sigma", "0:1:0.5"])
    assert err.value.code == 2  # bad step is an argument error


def test_validate_passes_and_is_deterministic(capsys):
    code, out1, _ = run(capsys, "validate", "--seed", "7", "--count", "20000")
    assert code == 0
    assert "[FAIL]" not in out1
    code, out2, _ = run(capsys, "validate", "--seed", "7", "--count", "20000")
    assert code == 0
    assert out1 == out2


def test_validate_corrupted_state_exits_1(tmp_path, capsys):
    cov = (0.5 * np.eye(4)).tolist()
    cov[0][1] = 0.3  # asymmetric entry
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n_modes": 2, "mean": [0.0] * 4, "cov": cov}))
    code, out, _ = run(capsys, "validate", "--state", str(path))
    assert code == 1
    assert "cov-symmetry" in out


def test_validate_unphysical_state_exits_1(tmp_path, capsys):
    path = tmp_path / "weak.json"
    path.write_text(json.dumps({"n_modes": 1, "mean": [0.0, 0.0], "cov": [[0.1, 0.0], [0.0, 0.1]]}))
    code, out, _ = run(capsys, "validate", "--state", str(path))
    assert code == 1
    assert "physicality" in out


def test_validate_good_state_file(tmp_path, capsys):
    path = tmp_path / "good.json"
    run(capsys, "build", "--r", "1", "--sigma", "1", "--out", str(path))
    code, out, _ = run(capsys, "validate", "--state", str(path))
    assert code == 0
    assert "[FAIL]" not in out
