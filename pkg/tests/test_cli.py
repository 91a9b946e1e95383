import json
import math
import os
import subprocess
import sys

import pytest

from becharvest import cli
from becharvest.cli import main, parse_args, write_atomic
from becharvest.errors import ConfigError


def run_main(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_harvest_flags():
    cfg = parse_args(["harvest", "--R", "0", "--A", "1", "--kind", "li",
                      "--omega-gap", "1", "--sigma", "5",
                      "--separation", "1"])
    assert cfg.command == "harvest"
    assert cfg.model.R == 0.0 and cfg.model.A == 1.0
    assert cfg.pair.omega_gap == 1.0
    assert cfg.pair.sigma == 5.0
    assert cfg.pair.separation == 1.0
    assert cfg.fmt == "json"


def test_parse_sweep_axes():
    cfg = parse_args(["sweep", "--R", "0", "--A", "1", "--kind", "li",
                      "--sigma", "5",
                      "--axis", "omega_gap:0.01:2:100",
                      "--axis", "separation:0.1:10:100"])
    assert len(cfg.axes) == 2
    assert len(cfg.axes[0].values) * len(cfg.axes[1].values) == 10000
    assert cfg.fmt == "csv"  # sweep defaults to csv


def test_parse_rejects_model_conflict():
    with pytest.raises(ConfigError):
        parse_args(["harvest", "--R", "0", "--A", "1", "--m", "1",
                    "--kind", "li", "--omega-gap", "1", "--sigma", "1",
                    "--separation", "1"])


def test_parse_requires_model():
    with pytest.raises(ConfigError):
        parse_args(["harvest", "--kind", "li", "--omega-gap", "1",
                    "--sigma", "1", "--separation", "1"])


def test_unknown_flag_exits_2(capsys):
    code, _, _ = run_main(["harvest", "--nope", "1"], capsys)
    assert code == 2


def test_help_lists_flags(capsys):
    with pytest.raises(SystemExit) as exc:
        parse_args(["harvest", "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for flag in ("--R", "--A", "--kind", "--omega-gap", "--sigma",
                 "--separation", "--rel-tol", "--out", "--format",
                 "--config", "--m", "--omega-z", "--g-c", "--g-d", "--rho0"):
        assert flag in out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def test_stability_command(capsys):
    code, out, _ = run_main(["stability", "--R", "1.2533"], capsys)
    assert code == 0
    assert "3.44" in out


def test_stability_no_instability(capsys):
    code, out, err = run_main(["stability", "--R", "0.1"], capsys)
    assert code == 0
    assert json.loads(out)["instability"] is False
    assert "no instability" in err.lower()


def test_ddi_gate_exits_2_citing_critical_value(capsys):
    code, _, err = run_main(
        ["harvest", "--A", "5", "--R", "1.2533", "--kind", "dipolar",
         "--omega-gap", "1", "--sigma", "1", "--separation", "1"], capsys)
    assert code == 2
    assert "3.4454" in err


def test_harvest_json_record(tmp_path, capsys):
    out = tmp_path / "point.json"
    code, _, _ = run_main(
        ["harvest", "--R", "0", "--A", "1", "--kind", "li",
         "--omega-gap", "0.5", "--sigma", "5", "--separation", "1",
         "--out", str(out)], capsys)
    assert code == 0
    payload = json.loads(out.read_text())
    for key in ("p", "c", "x_re", "x_im", "concurrence", "est_errors",
                "inputs"):
        assert key in payload
    assert abs(payload["p"] - 2.133221749790799e-06) < 1e-12
    assert payload["inputs"]["kind"] == "li"


def test_dispersion_contact_csv(tmp_path, capsys):
    out = tmp_path / "spec.csv"
    code, _, _ = run_main(
        ["dispersion", "--R", "0", "--A", "1", "--kind", "contact",
         "--x-max", "10", "--n", "501", "--format", "csv",
         "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,f,omega"
    row = dict(zip(("x", "f", "omega"), lines[101].split(",")))
    assert float(row["x"]) == 2.0
    assert abs(float(row["f"]) - math.sqrt(2.0)) < 1e-12


def test_sweep_command_csv(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _, _ = run_main(
        ["sweep", "--R", "0", "--A", "1", "--kind", "li", "--sigma", "5",
         "--axis", "omega_gap:0.5:1:2", "--axis", "separation:1:2:2",
         "--workers", "1", "--out", str(out)], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("omega_gap,separation,")


def test_physical_model_form(capsys):
    code, out, _ = run_main(
        ["harvest", "--m", "1", "--omega-z", "10", "--g-c", "0.1",
         "--g-d", "0.05", "--rho0", "100", "--kind", "dipolar",
         "--omega-gap", "0.5", "--sigma", "2", "--separation", "1"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["inputs"]["physical"]["m"] == 1.0


def test_validate_command(capsys):
    code, out, _ = run_main(["validate"], capsys)
    assert code == 0
    assert "6/6" in out


# ---------------------------------------------------------------------------
# config files
# ---------------------------------------------------------------------------

def test_config_merge_flags_win(tmp_path, capsys):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({
        "R": 0.0, "A": 1.0, "kind": "li", "omega_gap": 0.5,
        "sigma": 5.0, "separation": 1.0}))
    cfg = parse_args(["harvest", "--config", str(cfg_file),
                      "--sigma", "2.0"])
    assert cfg.pair.sigma == 2.0  # flag beats file
    assert cfg.pair.omega_gap == 0.5  # file fills the rest


def test_config_command_mismatch(tmp_path):
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"command": "sweep"}))
    with pytest.raises(ConfigError):
        parse_args(["harvest", "--config", str(cfg_file)])


def test_bundled_fig_config_parses():
    import becharvest
    figs = os.path.join(os.path.dirname(becharvest.__file__), "figs")
    cfg = parse_args(["sweep", "--config", os.path.join(figs, "fig3.json")])
    assert cfg.pair.sigma == 5.0
    assert len(cfg.axes) == 2
    assert cfg.fmt == "csv"
    cfg5 = parse_args(["sweep", "--config", os.path.join(figs, "fig5.json")])
    assert cfg5.axes[0].values == (0.5, 1.0, 2.0)


# ---------------------------------------------------------------------------
# atomic output
# ---------------------------------------------------------------------------

def test_write_atomic_no_partial_on_failure(tmp_path, monkeypatch):
    target = tmp_path / "out.csv"

    def failing_replace(src, dst):
        raise OSError("simulated interruption")

    monkeypatch.setattr(os, "replace", failing_replace)
    with pytest.raises(OSError):
        write_atomic(str(target), "data")
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []  # temp file cleaned up


def test_write_atomic_success(tmp_path):
    target = tmp_path / "out.txt"
    write_atomic(str(target), "payload\n")
    assert target.read_text() == "payload\n"


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "becharvest", "stability", "--R",
         "1.2533141373155003"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "A_c" in proc.stdout
