"""In-process checks of the command-line entry points."""

import json

import pytest

from nlsdamp.cli import main

EVOLVE_CONFIG = """\
id = cli_demo
dim = 1
n = 256
box = 15.0
initial_data = gaussian
initial_amplitude = 0.8
initial_width = 1.0
damping = gaussian_bump
damping_amplitude = 1.0
damping_sigma = 2.0
dt0 = 1e-3
t_end = 0.05
record_every = 5
outputs = {out}
"""


def test_evolve_command_runs_and_writes(tmp_path, capsys):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(EVOLVE_CONFIG.format(out=tmp_path / "out"))
    code = main(["evolve", "--config", str(cfg_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "scenario     cli_demo" in out
    assert "stop reason  horizon_reached" in out
    assert "blew up      false" in out
    assert "envelope ok      true" in out
    assert "check global_existence: pass" in out
    run_dir = tmp_path / "out" / "cli_demo"
    for name in ("rows.csv", "report.json", "balance.json", "checks.json"):
        assert (run_dir / name).exists()
    report = json.loads((run_dir / "report.json").read_text())
    assert report["scenario_id"] == "cli_demo"
    assert report["stop_reason"] == "horizon_reached"
    checks = json.loads((run_dir / "checks.json").read_text())
    assert [c["claim"] for c in checks] == ["global_existence"]


def test_evolve_out_flag_overrides_directory(tmp_path):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(EVOLVE_CONFIG.format(out=tmp_path / "ignored"))
    code = main(["evolve", "--config", str(cfg_path), "--out",
                 str(tmp_path / "chosen")])
    assert code == 0
    assert (tmp_path / "chosen" / "cli_demo" / "rows.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_evolve_missing_config_is_exit_2(tmp_path, capsys):
    code = main(["evolve", "--config", str(tmp_path / "absent.cfg")])
    assert code == 2
    assert "configuration error" in capsys.readouterr().err


def test_evolve_unknown_key_is_exit_2(tmp_path, capsys):
    cfg_path = tmp_path / "bad.cfg"
    cfg_path.write_text("bogus = 1\n")
    code = main(["evolve", "--config", str(cfg_path)])
    assert code == 2
    assert "unknown key" in capsys.readouterr().err


def test_ground_state_command_writes_profile(tmp_path, capsys):
    code = main(["ground-state", "--dim", "1", "--n", "256", "--box", "12.0",
                 "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "mass_sq" in out
    payload = json.loads((tmp_path / "ground_state_d1.json").read_text())
    assert payload["dim"] == 1
    assert payload["mass_sq"] == pytest.approx(2.7206990463513265, abs=1e-6)
    assert payload["residual"] < 1e-10
    csv_lines = (tmp_path / "ground_state_d1.csv").read_text().splitlines()
    assert csv_lines[0] == "x_1,q"
    assert len(csv_lines) == 1 + 256


def test_suite_bad_config_is_exit_2(tmp_path, capsys):
    cfg_path = tmp_path / "suite.cfg"
    cfg_path.write_text("id = nope\n")
    code = main(["suite", "--config", str(cfg_path)])
    assert code == 2
    assert "unknown key" in capsys.readouterr().err


def test_gn_check_small_sample(capsys):
    code = main(["gn-check", "--dim", "1", "--n", "256", "--box", "12.0",
                 "--samples", "25", "--seed", "3"])
    out = capsys.readouterr().out
    assert code == 0
    assert "bound holds" in out


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
