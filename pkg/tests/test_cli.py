import json
import subprocess
import sys

import pytest

from epl import cli
from epl.kripke import PointedModel, dump_model
from epl.scenarios import two_state_model


@pytest.fixture
def two_state(tmp_path):
    path = tmp_path / "two_state.json"
    dump_model(PointedModel(two_state_model(), "s"), str(path))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


def test_check_at_t(capsys, two_state):
    rep = run_json(capsys, "check", "-m", two_state, "-f", "~ (p & B p) -> [ann p & B p](p & B p)", "--at", "t")
    assert rep["value"] is True
    rep = run_json(capsys, "check", "-m", two_state, "-f", "~ (p & B p) -> [ann p & B p](p & B p)")
    assert rep["value"] is False and rep["point"] == "s"


def test_scenario_prop5_all_pass(capsys):
    code, out, _ = run(capsys, "scenario", "run", "prop5")
    assert code == 0
    lines = [l for l in out.splitlines() if l.strip().startswith(("PASS", "FAIL"))]
    assert len(lines) == 17 and all(l.strip().startswith("PASS") for l in lines)
    assert sum("bisimilar" in l for l in lines) == 5


def test_dlf_prints_witness(capsys):
    rep = run_json(capsys, "dlf", "-f", "p & B p")
    assert rep["witness"]["S"] == ["p & B{a} p"] and rep["witness"]["T"] == []
    assert rep["witness"]["chi"]


def test_text_and_json_agree(capsys, two_state):
    for argv in (["sigma-valid", "-f", "p | B p", "--sigma", "0111", "--class", "k45"],
                 ["decide", "-f", "B p -> p", "--class", "kd45"],
                 ["trace", "-m", two_state, "-f", "p | B p", "--steps", "3"],
                 ["bisim", "-m", two_state, "-m", two_state]):
        rep = run_json(capsys, *argv)
        code, text, _ = run(capsys, *argv)
        assert code == 0
        for k, v in rep.items():
            if isinstance(v, (bool, int, str)):
                shown = json.dumps(v) if isinstance(v, bool) else str(v)
                assert f"{k}: {shown}" in text


def test_output_is_deterministic(capsys):
    first = run(capsys, "enumerate", "--atoms", "p,q", "--class", "kd45")
    second = run(capsys, "enumerate", "--atoms", "p,q", "--class", "kd45")
    assert first == second and "count: 60" in first[1]


def test_update_and_dot_write_files(capsys, two_state, tmp_path):
    out = tmp_path / "after.json"
    rep = run_json(capsys, "update", "-m", two_state, "-f", "B p", "--out", str(out))
    assert rep["written"] == str(out)
    assert json.loads(out.read_text())["rel"]["a"] == []
    dot = tmp_path / "m.dot"
    run_json(capsys, "dot", "-m", two_state, "--style", "simplified", "--out", str(dot))
    assert dot.read_text().startswith("digraph")


@pytest.mark.parametrize("argv", [
    ["check", "-m", "missing.json", "-f", "p"],
    ["check", "-f", "p &"],
    ["scenario", "run", "fan", "N=40"],
    ["scenario", "run", "unknown"],
    ["dnf", "-f", "B{a} p & B{b} p"],
    ["sigma-valid", "-f", "p", "--sigma", "2"],
    ["frobnicate"],
])
def test_user_errors_exit_one(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and err


def test_syntax_error_reports_position(capsys, two_state):
    code, _, err = run(capsys, "check", "-m", two_state, "-f", "p & (q")
    assert code == 1 and "column 7" in err


def test_internal_errors_exit_two(capsys, monkeypatch):
    def boom(args):
        raise RuntimeError("bug")

    monkeypatch.setitem(cli.VERBS, "dnf", boom)
    code, _, err = run(capsys, "dnf", "-f", "p")
    assert code == 2 and "internal error" in err


def test_console_entry_point_runs():
    out = subprocess.run([sys.executable, "-m", "epl.cli", "scenario", "list"], capture_output=True, text=True)
    assert out.returncode == 0 and "butterfly" in out.stdout
