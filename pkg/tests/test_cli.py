import json

import pytest

from cantorlab.cli import EXIT_INVARIANT, EXIT_NUMERIC, EXIT_SCHEMA, run

SOBOLEV = ["--regime", "sobolev", "--k", "2", "--B", "10", "--delta", "0.01", "--s", "0.25", "--lo", "-0.0051", "-0.0051", "--hi", "0.0051", "0.0051"]
DIMENSION = ["--regime", "dimension", "--k", "2", "--B", "1", "--d", "1", "--delta", "0.1"]

# one quick invocation per subcommand
COMMANDS = {
    "build": ["build", *DIMENSION, "--depth", "6"],
    "eval": ["eval", *SOBOLEV, "--depth", "4", "--points", "50"],
    "residuals": ["residuals", *DIMENSION, "--depth", "5", "--samples", "100"],
    "verify": ["verify", *SOBOLEV, "--depth", "6", "--samples", "100"],
    "seminorm": ["seminorm", "--s", "0.5", "--budget", "100000"],
    "dimension": ["dimension", "--regime", "dimension", "--k", "2", "--B", "2", "--d", "1.5", "--delta", "0.1"],
    "superdensity": ["superdensity", *SOBOLEV, "--depth", "6", "--samples", "5000"],
    "stokes": ["stokes", "--form", "monomial:2,3,1"],
    "escape": ["escape", *SOBOLEV, "--depth", "6", "--offsets", "8"],
    "witness": ["witness", *SOBOLEV, "--depth", "6"],
    "phase": ["phase", "--q", "1.5", "--resolution", "32"],
    "check": ["check", "--jobs", "2"],
}


def _run(argv, capsys):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", list(COMMANDS))
def test_commands_are_deterministic(name, capsys):
    code1, out1, _ = _run(COMMANDS[name], capsys)
    code2, out2, _ = _run(COMMANDS[name], capsys)
    assert code1 == 0 and code2 == 0
    assert out1 and out1 == out2


def test_csv_format(capsys):
    _, out, _ = _run(["phase", "--q", "inf", "--resolution", "16"], capsys)
    lines = out.split("\r\n")
    assert lines[0] == "s,alpha,q,tau,label"
    assert len(lines) == 16 * 16 + 2 and lines[-1] == ""


def test_build_writes_scaffold(tmp_path, capsys):
    out = tmp_path / "scaffold.json"
    code, table, _ = _run(COMMANDS["build"] + ["--out", str(out), "--check"], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["card_L1"] == 81 and len(doc["r"]) == 7
    assert table.startswith("level,r,count,measure,closed_form,difference")
    code, report, _ = _run(["verify", "--scaffold", str(out), "--depth", "6", "--samples", "50", "--check"], capsys)
    assert code == 0
    rep = json.loads(report)
    assert rep["pass_rate"] == 1.0
    assert rep["certificate"] == {"a": 1, "b": 2, "p": 1, "defect": 4.0}


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "phase", "q": 4, "resolution": 64}))
    _, a, _ = _run(["phase", "--config", str(cfg)], capsys)
    _, b, _ = _run(["phase", "--q", "4", "--resolution", "64"], capsys)
    _, c, _ = _run(["phase", "--config", str(cfg), "--resolution", "16"], capsys)
    assert a == b
    assert len(c.split("\r\n")) == 16 * 16 + 2


@pytest.mark.parametrize(
    "argv",
    [
        ["phase", "--resolution", "8"],
        ["phase", "--q", "0.5"],
        ["build", "--regime", "nonsense", "--depth", "2"],
        ["stokes", "--form", "unknown"],
        ["build", "--depth", "2"],
    ],
)
def test_schema_errors(argv, capsys):
    assert _run(argv, capsys)[0] == EXIT_SCHEMA


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"command": "phase", "colour": "red"}))
    code, _, err = _run(["phase", "--config", str(cfg)], capsys)
    assert code == EXIT_SCHEMA and "colour" in err


def test_numeric_errors(capsys):
    assert _run(["build", "--regime", "sobolev", "--B", "3", "--s", "0.25", "--depth", "2"], capsys)[0] == EXIT_NUMERIC
    assert _run(["build", "--regime", "dimension", "--d", "1", "--delta", "2", "--B", "1", "--depth", "2"], capsys)[0] == EXIT_NUMERIC


def test_check_mode_reports_violation(capsys):
    # without a theoretical dimension there is nothing to violate
    code, _, err = _run(["dimension", "--regime", "sobolev", "--s", "0.25", "--levels", "1", "2", "3", "--check"], capsys)
    assert code == 0
    # on this measure-zero set the whole boundary escapes, so the exponent is exactly 1
    code, _, err = _run(["escape", *DIMENSION, "--depth", "6", "--offsets", "2", "--radii", "0.01", "0.005", "--check"], capsys)
    assert code == EXIT_INVARIANT and "escape exponent" in err
