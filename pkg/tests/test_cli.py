import csv
import json

import pytest

from cli import avoider_enforcer
from core.properties import GameFamily
from core.transcript import Transcript

HEADER = (
    "n,family,k,avoider,enforcer,seed,loss_move,bound_lower,bound_upper,"
    "theorem_lower,within_bounds,diagnostics"
)


def test_play_writes_transcript_and_summary(tmp_path, capsys):
    path = tmp_path / "t.json"
    exit_code = avoider_enforcer.run_cli(
        [
            "play",
            "--family",
            "diamond",
            "--n",
            "41",
            "--avoider",
            "paper-diamond-avoider",
            "--enforcer",
            "random",
            "--seed",
            "9",
            "--transcript",
            str(path),
        ]
    )
    assert exit_code == 0
    family, n, seed, loss = capsys.readouterr().out.split()
    assert (family, n, seed) == ("diamond", "41", "9")
    assert int(loss) >= 57
    transcript = Transcript.load(path)
    assert transcript.result.loss_move == int(loss)

    assert avoider_enforcer.run_cli(["check", "--transcript", str(path)]) == 0
    assert capsys.readouterr().out.startswith("ok diamond 41 9")


def test_play_small_outerplanar_board_is_survived(capsys):
    args = ["play", "--family", "outerplanar", "--n", "4"]
    args += ["--avoider", "random", "--enforcer", "random", "--seed", "0"]
    assert avoider_enforcer.run_cli(args) == 0
    assert capsys.readouterr().out == "outerplanar 4 0 survived\n"


def test_play_forest_game_ends_at_n(capsys):
    args = ["play", "--family", "kdegenerate", "--k", "1", "--n", "200"]
    args += ["--avoider", "paper-kdeg-avoider", "--enforcer", "pairing-enforcer", "--seed", "2"]
    assert avoider_enforcer.run_cli(args) == 0
    assert capsys.readouterr().out.split()[-1] == "200"


@pytest.mark.parametrize(
    "args",
    [
        ["play", "--family", "kdegenerate", "--n", "10", "--avoider", "random", "--enforcer", "random"],
        ["play", "--family", "diamond", "--n", "10", "--avoider", "nope", "--enforcer", "random"],
        ["play", "--family", "diamond", "--n", "1", "--avoider", "random", "--enforcer", "random"],
        ["play", "--family", "diamond", "--avoider", "random", "--enforcer", "random"],
        ["sweep", "--family", "diamond", "--n-min", "9", "--n-max", "5"]
        + ["--avoider", "random", "--enforcer", "random"],
        ["sweep", "--family", "diamond", "--n", "9", "--trials", "0"]
        + ["--avoider", "random", "--enforcer", "random"],
        ["play", "--family", "diamond", "--n", "10", "--avoider", "pairing-enforcer"]
        + ["--enforcer", "random"],
    ],
)
def test_invalid_configuration_exits_with_usage_error(args, capsys):
    assert avoider_enforcer.run_cli(args) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_unknown_flag_is_a_usage_error():
    with pytest.raises(SystemExit) as info:
        avoider_enforcer.run_cli(["play", "--colour", "red"])
    assert info.value.code == 2


def _sweep(tmp_path, name, workers="1"):
    out = tmp_path / name
    args = ["sweep", "--family", "diamond", "--n-min", "12", "--n-max", "20", "--n-step", "4"]
    args += ["--avoider", "paper-diamond-avoider", "--enforcer", "random"]
    args += ["--trials", "3", "--seed", "100", "--out", str(out), "--workers", workers]
    assert avoider_enforcer.run_cli(args) == 0
    return out


def test_sweep_rows_are_ordered_and_bounded(tmp_path, capsys):
    out = _sweep(tmp_path, "sweep.csv")
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == HEADER
    rows = list(csv.DictReader(text.splitlines()))
    assert [(int(r["n"]), int(r["seed"])) for r in rows] == [
        (n, 100 + t) for n in (12, 16, 20) for t in range(3)
    ]
    for row in rows:
        assert row["k"] == ""
        assert int(row["loss_move"]) >= int(row["theorem_lower"])
        assert row["within_bounds"] == "true"
    summary = capsys.readouterr().out.splitlines()
    assert [line.split()[0] for line in summary] == ["n=12", "n=16", "n=20", "guarantee_from=12"]
    assert all("max=" in line for line in summary[:3])
    assert not any("2n-3" in line for line in summary)


def test_sweep_output_is_byte_identical(tmp_path):
    first = _sweep(tmp_path, "a.csv").read_bytes()
    second = _sweep(tmp_path, "b.csv").read_bytes()
    parallel = _sweep(tmp_path, "c.csv", workers="2").read_bytes()
    assert first == second == parallel


def test_sweep_json_and_transcript_directory(tmp_path, capsys):
    out = tmp_path / "rows.json"
    folder = tmp_path / "games"
    args = ["sweep", "--family", "kdegenerate", "--k", "2", "--n", "12", "--trials", "2"]
    args += ["--avoider", "greedy-avoider", "--enforcer", "saboteur-enforcer"]
    args += ["--format", "json", "--out", str(out), "--transcript", str(folder)]
    assert avoider_enforcer.run_cli(args) == 0
    rows = json.loads(out.read_text(encoding="utf-8"))
    assert [row["seed"] for row in rows] == [0, 1]
    assert rows[0]["k"] == 2
    files = sorted(folder.iterdir())
    assert [f.name for f in files] == ["kdegenerate-n12-seed0.json", "kdegenerate-n12-seed1.json"]
    for path in files:
        assert avoider_enforcer.run_cli(["check", "--transcript", str(path)]) == 0


def test_solve_prints_value_and_bounds(tmp_path, capsys):
    out = tmp_path / "solve.csv"
    args = ["solve", "--family", "kdegenerate", "--k", "1", "--n", "5", "--out", str(out)]
    assert avoider_enforcer.run_cli(args) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("family=kdegenerate(k=1) n=5 tau=")
    assert lines[1] == "bounds=(3, 5) pass"
    row = next(csv.DictReader(out.read_text(encoding="utf-8").splitlines()))
    assert row["avoider"] == row["enforcer"] == "optimal"
    assert 3 <= int(row["loss_move"]) <= 5


def test_solve_reports_avoider_wins(capsys):
    assert avoider_enforcer.run_cli(["solve", "--family", "outerplanar", "--n", "4"]) == 0
    assert "tau=infinite" in capsys.readouterr().out


def test_solve_capacity_error_exits_with_failure(capsys):
    assert avoider_enforcer.run_cli(["solve", "--family", "outerplanar", "--n", "9"]) == 1
    assert capsys.readouterr().err.startswith("capacity:")


def test_check_reports_corrupted_transcript(tmp_path, capsys):
    path = tmp_path / "t.json"
    args = ["play", "--family", "outerplanar", "--n", "10"]
    args += ["--avoider", "greedy-avoider", "--enforcer", "random", "--transcript", str(path)]
    assert avoider_enforcer.run_cli(args) == 0
    document = json.loads(path.read_text(encoding="utf-8"))
    document["moves"][1]["p"] = "A"
    path.write_text(json.dumps(document), encoding="utf-8")
    capsys.readouterr()
    assert avoider_enforcer.run_cli(["check", "--transcript", str(path)]) == 1
    assert capsys.readouterr().out.startswith("FAIL alternation at move 2")


def test_check_rejects_malformed_files(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{", encoding="utf-8")
    assert avoider_enforcer.run_cli(["check", "--transcript", str(path)]) == 2
    missing = tmp_path / "missing.json"
    assert avoider_enforcer.run_cli(["check", "--transcript", str(missing)]) == 2


def test_check_evaluates_graph_files(tmp_path, capsys):
    path = tmp_path / "k4.txt"
    path.write_text("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n", encoding="utf-8")
    args = ["check", "--graph", str(path), "--family", "outerplanar"]
    assert avoider_enforcer.run_cli(args) == 0
    out = capsys.readouterr().out
    assert "losing=yes" in out
    assert "degeneracy=3" in out
    assert "extremal=5" in out


def test_summary_reports_maximum_and_guarantee_start():
    family = GameFamily.outerplanar()
    games = [(50, 0, 95), (50, 1, 97), (60, 2, 112), (70, 3, 140)]
    rows = [
        avoider_enforcer.SweepRow.build(
            family, n, "paper-op-avoider", "pairing-enforcer", seed, loss, 0
        )
        for n, seed, loss in games
    ]
    assert avoider_enforcer.summarize(rows) == [
        "n=50 min=95 median=96 max=97 max<=2n-3=yes",
        "n=60 min=112 median=112 max=112 max<=2n-3=yes",
        "n=70 min=140 median=140 max=140 max<=2n-3=no",
        "guarantee_from=70",
    ]


def test_summary_of_survived_games():
    family = GameFamily.outerplanar()
    rows = [avoider_enforcer.SweepRow.build(family, 4, "random", "random", 0, None, 0)]
    assert avoider_enforcer.summarize(rows) == [
        "n=4 min=survived median=survived max=survived survived=1",
        "guarantee_from=4",
    ]
