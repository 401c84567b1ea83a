#!/usr/bin/env python3

"""
Command line surface: exit codes, text and json reports
"""

import json

import pytest

from geograph.cli import main, run
from geograph.enums import Command
from geograph.globals import CATALOG_DIR, SCHEMA_VERSION
from geograph.space import load_catalog_space
from geograph.verify import SampleConfig


def test_solve_h3_text(capsys):
    assert main(["solve", "--space", "h3", "--samples", "20"]) == 0
    out = capsys.readouterr().out
    assert "xi[D] = c * y3" in out
    assert "xi[D] = y3" in out


def test_solve_qpower_json(capsys):
    assert main(["solve", "--space", "h3-qpower", "--json", "--samples", "20"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == SCHEMA_VERSION
    assert report["command"] == "solve"
    assert report["sections"]["finsler_graph"]["provenance"] == "theorem1"
    assert report["sections"]["finsler_graph"]["graph"] == ["xi[D] = (B1 + 4*B2)/(B1 + B2) * y3"]


def test_verdict_exit_codes(capsys):
    assert main(["verdict", "--space", "h3xR-beta", "--samples", "50"]) == 0
    assert "verdict: naturally_reductive" in capsys.readouterr().out
    assert main(["verdict", "--space", "h3-alphabeta", "--samples", "50"]) == 1
    assert "verdict: go_not_naturally_reductive" in capsys.readouterr().out


def test_verify_passes(capsys):
    assert main(["verify", "--space", "h3-qpower", "--samples", "50", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert all(entry["passed"] for entry in report["evidence"])
    assert report["sections"]["admissibility"]["ok"]


def test_catalog_lists_every_space(capsys):
    assert main(["catalog"]) == 0
    out = capsys.readouterr().out
    for name in ["h3", "h3-alphabeta", "h3xh3-fproduct"]:
        assert name in out


def test_describe_echoes_space(capsys):
    assert main(["describe", "--file", str(CATALOG_DIR / "h3.json"), "--json", "--param", "c=2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["sections"]["space"]["metrics"] == [["1", "2"]]
    assert report["sections"]["validation"]["ok"]


@pytest.mark.parametrize("argv", [
    ["solve", "--space", "h3", "--file", "h3.json"],
    ["solve"],
    ["solve", "--space", "h5"],
    ["solve", "--space", "h3", "--samples", "0"],
    ["solve", "--space", "h3", "--seed", "-1"],
    ["solve", "--space", "h3", "--param", "c"],
    ["solve", "--space", "h3", "--param", "d=1"],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    assert "geograph: error:" in capsys.readouterr().err


def test_bad_space_file_exit_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\n  \"name\": \n}\n")
    assert main(["describe", "--file", str(path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_non_invariant_one_form_exit_2(tmp_path, capsys):
    with open(CATALOG_DIR / "h3-alphabeta.json", "r") as file_h:
        document = json.load(file_h)
    document["one_forms"] = [["1/4", "0", "0"]]
    path = tmp_path / "tilted.json"
    path.write_text(json.dumps(document))
    assert main(["verdict", "--file", str(path), "--samples", "20"]) == 2
    assert "one_forms[0]" in capsys.readouterr().err


def test_bad_worker_count_exit_2(monkeypatch, capsys):
    monkeypatch.setenv("GEOGRAPH_WORKERS", "none")
    assert main(["verify", "--space", "h3", "--samples", "5"]) == 2


def test_run_reports_are_deterministic():
    space_file = load_catalog_space("h3-qpower")
    first = run(Command.VERDICT, space_file, SampleConfig(30, 5)).to_dict()
    second = run(Command.VERDICT, space_file, SampleConfig(30, 5)).to_dict()
    first.pop("elapsed_seconds")
    second.pop("elapsed_seconds")
    assert first == second
