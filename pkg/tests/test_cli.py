import json

import pytest

from fastgates.cli import main

SMALL_CONFIG = """
[optimizer]
n_min = 1
n_max = 12
"""


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(SMALL_CONFIG)
    return str(path)


def test_crystal_writes_tables(tmp_path, config_path, capsys):
    out = tmp_path / "out"
    code = main(["--config", config_path, "--out", str(out), "crystal"])
    assert code == 0
    assert (out / "crystal.json").exists()
    assert (out / "positions.csv").exists()
    modes = (out / "modes.csv").read_text().splitlines()
    assert modes[0].startswith("mode,frequency_rad_s,lamb_dicke")
    assert len(modes) == 3
    assert "min radial ratio" in capsys.readouterr().out


def test_design_writes_manifest_and_trajectories(tmp_path, config_path):
    out = tmp_path / "out"
    code = main(["--config", config_path, "--out", str(out),
                 "design", "--points", "17"])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["result"]["infidelity"] < 1e-8
    scheme = json.loads((out / "scheme.json").read_text())
    assert scheme == manifest["scheme"]
    for state in ("gg", "ge", "eg", "ee"):
        lines = (out / f"trajectory_{state}.csv").read_text().splitlines()
        assert lines[0] == "t_s,q_mode1,p_mode1,q_mode2,p_mode2"
        assert len(lines) == 18


def test_power_output(capsys):
    assert main(["power", "--rate-ghz", "5", "--energy-nj", "12"]) == 0
    assert "60" in capsys.readouterr().out
    assert main(["power", "--rate-ghz", "0", "--energy-nj", "12"]) == 2


def test_sweep_timing_shift_byte_stable(tmp_path, config_path):
    out = tmp_path / "out"
    args = ["--config", config_path, "--out", str(out), "sweep",
            "--axis", "timing-shift", "--shifts-ps=-5,0,5"]
    assert main(args) == 0
    first = (out / "sweep.csv").read_bytes()
    assert main(args) == 0
    assert (out / "sweep.csv").read_bytes() == first
    data = json.loads((out / "sweep.json").read_text())
    assert data["columns"] == ["shift_s", "fidelity"]


def test_sweep_requires_axis_params(config_path):
    assert main(["--config", config_path, "sweep",
                 "--axis", "repetition-rate"]) == 2


def test_trajectory_subcommand(tmp_path, config_path):
    out = tmp_path / "out"
    code = main(["--config", config_path, "--out", str(out), "trajectory",
                 "--state", "gg", "--mode", "2", "--points", "9"])
    assert code == 0
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t_s,position,momentum"
    assert len(lines) == 10


def test_displacement_subcommand(tmp_path, config_path):
    out = tmp_path / "out"
    code = main(["--config", config_path, "--out", str(out), "displacement",
                 "--points", "9"])
    assert code == 0
    lines = (out / "displacement.csv").read_text().splitlines()
    assert lines[0] == "t_s,x_ion1_m,x_ion2_m"


def test_infeasible_exit_code(tmp_path):
    path = tmp_path / "bad.ini"
    path.write_text("[laser]\nrepetition_rate_ghz = 0.01\n"
                    "[optimizer]\nn_min = 1\nn_max = 1\n")
    assert main(["--config", str(path), "--out", str(tmp_path), "design"]) == 3


def test_config_errors_exit_usage(tmp_path, capsys):
    missing = str(tmp_path / "nope.ini")
    assert main(["--config", missing, "crystal"]) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[trap]\nfrequency_mhz = slow\n")
    assert main(["--config", str(bad), "crystal"]) == 2
    assert "trap.frequency_mhz" in capsys.readouterr().err


def test_seed_override(tmp_path, config_path):
    out = tmp_path / "out"
    code = main(["--config", config_path, "--seed", "5", "--out", str(out),
                 "design", "--points", "5"])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["rng_seed"] == 5


def test_format_restriction(tmp_path, config_path):
    out = tmp_path / "out"
    code = main(["--config", config_path, "--out", str(out),
                 "--format", "json", "crystal"])
    assert code == 0
    assert (out / "crystal.json").exists()
    assert not (out / "positions.csv").exists()
