"""Command-line interface: outputs, exit codes, file handling."""

import json

import pytest

from repgame import parse_game, serialize_game
from repgame.cli import main


@pytest.fixture()
def chain3_file(tmp_path, chain3_game):
    path = tmp_path / "chain3.json"
    path.write_text(serialize_game(chain3_game))
    return str(path)


def test_gen_round_trips(tmp_path, capsys):
    assert main(["gen", "chsh"]) == 0
    out = capsys.readouterr().out
    game = parse_game(out)
    assert game.k == 2


def test_gen_unknown_name(capsys):
    assert main(["gen", "nonsense"]) == 2
    assert "unknown game" in capsys.readouterr().err


def test_gen_random_deterministic(capsys):
    assert main(["gen", "random", "--seed", "42"]) == 0
    first = capsys.readouterr().out
    assert main(["gen", "random", "--seed", "42"]) == 0
    assert capsys.readouterr().out == first


def test_value_command(chain3_file, capsys):
    assert main(["value", chain3_file]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"]["str"] == "2/3"
    assert doc["exact"] is True
    assert len(doc["strategy"]) == 3


def test_value_budget_exceeded(chain3_file, capsys):
    assert main(["value", chain3_file, "--budget", "10"]) == 4
    assert "budget" in capsys.readouterr().err


def test_budget_env_override(chain3_file, capsys, monkeypatch):
    monkeypatch.setenv("REPGAME_BUDGET", "10")
    assert main(["value", chain3_file]) == 4
    monkeypatch.setenv("REPGAME_BUDGET", "100")
    assert main(["value", chain3_file]) == 0


def test_check_command(chain3_file, capsys):
    assert main(["check", chain3_file]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["projection"]["holds"] is True
    assert doc["connected"] is False
    assert doc["loosely_connected"] is True


def test_check_reports_counterexample(tmp_path, capsys, ghz_game):
    path = tmp_path / "ghz.json"
    path.write_text(serialize_game(ghz_game))
    assert main(["check", str(path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["projection"]["holds"] is False
    assert doc["projection"]["counterexample"]["missing_answers"] is not None


def test_repeat_value_command(chain3_file, capsys):
    assert main(["repeat-value", chain3_file, "--n", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"]["str"] == "5/9"


def test_repeat_value_local_search(chain3_file, capsys):
    assert (
        main(
            [
                "repeat-value", chain3_file,
                "--n", "3",
                "--method", "local-search",
                "--seed", "1",
            ]
        )
        == 0
    )
    doc = json.loads(capsys.readouterr().out)
    assert doc["exact"] is False


def test_transform_command(chain3_file, tmp_path, capsys):
    out_file = tmp_path / "t.json"
    assert main(["transform", chain3_file, "--i", "1", "--p", "2", "--out", str(out_file)]) == 0
    game = parse_game(out_file.read_text())
    assert len(game.mu) == 5


def test_transform_seq_file(chain3_file, tmp_path, capsys):
    seq = tmp_path / "seq.json"
    seq.write_text("[[1, 2], [2, 1]]")
    assert main(["transform", chain3_file, "--seq", str(seq)]) == 0
    game = parse_game(capsys.readouterr().out)
    assert len(game.mu) >= 5


def test_transform_missing_args(chain3_file, capsys):
    assert main(["transform", chain3_file]) == 2


def test_saturate_command(chain3_file, tmp_path, capsys):
    out_file = tmp_path / "sat.json"
    log_file = tmp_path / "log.csv"
    assert (
        main(["saturate", chain3_file, "--out", str(out_file), "--log", str(log_file)])
        == 0
    )
    game = parse_game(out_file.read_text())
    assert len(game.mu) == 8
    assert log_file.read_text().startswith("pass,step,support_size,M")
    assert "passes=" in capsys.readouterr().err


def test_saturate_rejects_diag3(tmp_path, capsys, diag3_game):
    path = tmp_path / "diag3.json"
    path.write_text(serialize_game(diag3_game))
    assert main(["saturate", str(path)]) == 3


def test_uniformize_command(chain3_file, capsys):
    assert main(["uniformize", chain3_file]) == 0
    game = parse_game(capsys.readouterr().out)
    assert game.mu is not None


def test_verify_suite(capsys):
    assert main(["verify", "--suite", "bundled"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("claim_id,")
    assert "false" not in out


def test_verify_unknown_suite(capsys):
    assert main(["verify", "--suite", "other"]) == 2


def test_decay_command(chain3_file, capsys):
    assert main(["decay", chain3_file, "--n-max", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[1] == "1,2,3,exact"
    assert lines[2] == "2,5,9,exact"


def test_export_dot(chain3_file, capsys):
    assert main(["export-dot", chain3_file, "--graph", "loose"]) == 0
    assert capsys.readouterr().out.startswith("graph {")
    assert main(["export-dot", chain3_file, "--graph", "player", "--player", "1"]) == 0


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["value", str(bad)]) == 2


def test_validation_error_exit_code(tmp_path, capsys, chsh_game):
    doc = json.loads(serialize_game(chsh_game))
    doc["mu"][0]["num"] = 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert main(["value", str(bad)]) == 3
