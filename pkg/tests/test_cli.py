import json
import subprocess
import sys

import pytest

from sybilshare.cli import CASES, main


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=1))
    return str(p)


def test_run_inline(capsys):
    assert main(["run", "--mechanism", "shapley", "--cost", "constant:1", "--bids", "1.5,0.6,0.2"]) == 0
    assert "winners [0, 1] payments [0.5, 0.5, 0.0]" in capsys.readouterr().out


def test_run_config_writes_report(tmp_path):
    out = tmp_path / "r.json"
    cfg = write(tmp_path, "c.json", {"mode": "run", "mechanism": "shapley",
                                     "cost": {"kind": "constant", "c": 1}, "bids": [1.5, 0.6, 0.2],
                                     "out": str(out)})
    assert main(["run", "--config", cfg]) == 0
    rep = json.loads(out.read_text())
    assert rep["winners"] == [0, 1] and rep["payments"] == [0.5, 0.5, 0.0]


def test_sybil_profile_run(capsys):
    assert main(["run", "--mechanism", "shapley", "--profile", "0.25,0.25;0.3233;0.3233"]) == 0
    assert "payments [0.5, 0.25, 0.25]" in capsys.readouterr().out


def test_check_exit_codes(capsys):
    assert main(["check", "--mechanism", "vcg", "--n", "2", "--max-sybils", "3", "--step", "0.1"]) == 1
    assert "violated" in capsys.readouterr().out
    assert main(["check", "--mechanism", "osp", "--n", "2", "--max-sybils", "2", "--step", "0.1"]) == 0
    assert main(["check", "--property", "truthful", "--mechanism", "shapley", "--n", "2", "--step", "0.1"]) == 0


def test_cap_violation_is_refused(capsys):
    assert main(["check", "--mechanism", "vcg", "--n", "5", "--max-sybils", "3"]) == 2
    err = capsys.readouterr().err
    assert "exceeds" in err and "lower max_sybils" in err


def test_worst_case_outputs_are_deterministic(tmp_path):
    cfg = write(tmp_path, "sweep-config.json", {"mode": "worst-case", "mechanism": "osp", "n": 5, "step": 0.05,
                                     "out": str(tmp_path / "w.csv")})
    assert main(["worst-case", "--config", cfg]) == 0
    first = (tmp_path / "w.csv").read_bytes(), (tmp_path / "w.json").read_bytes()
    assert main(["worst-case", "--config", cfg]) == 0
    assert first == ((tmp_path / "w.csv").read_bytes(), (tmp_path / "w.json").read_bytes())
    rows = first[0].decode().splitlines()
    assert rows[0] == "n,mechanism,cost_kind,ratio,witness,runtime_ms"
    ratio = float(rows[1].split(",")[3])
    assert 3 - 0.01 <= ratio <= 3 + 1e-7


def test_swi_config(tmp_path, capsys):
    cfg = write(tmp_path, "s.json", {"mode": "swi", "v": [1.01, 0.3233, 0.3233], "step": 0.05, "max_sybils": 3})
    assert main(["swi", "--config", cfg]) == 0
    assert "pass" in capsys.readouterr().out


def test_json_parse_error_has_line_context(tmp_path, capsys):
    cfg = write(tmp_path, "bad.json", '{"mode": "run",\n "mechanism": "shapley" "bids": [1]}')
    assert main(["run", "--config", cfg]) == 2
    err = capsys.readouterr().err
    assert ":2:" in err and '"mechanism": "shapley" "bids"' in err and "^" in err


@pytest.mark.parametrize("cfg,needle", [
    ({"mode": "run", "mechanizm": "shapley"}, "unknown key"),
    ({"mode": "fly"}, "mode must be one of"),
    ({"mode": "run", "mechanism": "shapley"}, "needs bids"),
    ({"mode": "run", "mechanism": "shapley", "bids": [0.5], "cost": {"kind": "concave", "f": [0, 1, 3]}}, "concavity"),
    ({"mode": "run", "mechanism": "nope", "bids": [0.5]}, "unknown mechanism"),
    ({"mode": "swi", "v": [0.5, 0.5, 0.5, 0.5, 0.5], "max_sybils": 3}, "exhaustive cap"),
    ({"mode": "reproduce", "case": "nope"}, "unknown case"),
])
def test_validation_errors(tmp_path, capsys, cfg, needle):
    path = write(tmp_path, "c.json", cfg)
    cmd = {"run": "run", "swi": "swi", "reproduce": "reproduce"}.get(cfg["mode"], "run")
    assert main([cmd, "--config", path]) == 2
    assert needle in capsys.readouterr().err


def test_mode_must_match_subcommand(tmp_path):
    path = write(tmp_path, "c.json", {"mode": "swi", "v": [0.5]})
    assert main(["run", "--config", path]) == 2


def test_usage_error_exit_code():
    assert main(["frobnicate"]) == 2


@pytest.mark.parametrize("case", [c for c in CASES if c != "potential-sybil"])
def test_reproduce_cases_match(case, capsys):
    assert main(["reproduce", case]) == 0
    out = capsys.readouterr().out
    assert "MISMATCH" not in out and "expected" in out


def test_reproduce_potential_reports_its_comparison(capsys):
    status = main(["reproduce", "potential-sybil"])
    out = capsys.readouterr().out
    assert "sybil identity payment: expected 0.198 observed 0.203" in out
    assert status == (1 if "MISMATCH" in out else 0)


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "sybilshare.cli", "reproduce", "vcg-sybil"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "sybil utility: expected 0.333333333333 observed 0.333333333333 ok" in res.stdout
