import json

import numpy as np
import pytest

from core.board import Edge, Player
from core.engine import LossMonitor, StrategyFaultError, play_game, stream_for
from core.properties import GameFamily
from core.registry import build_strategy, identifiers_for
from core.replay import check_transcript
from core.strategy import GreedyAvoider, RandomStrategy, ScriptedStrategy, Strategy
from core.transcript import (
    SURVIVED,
    GameResult,
    Transcript,
    TranscriptFormatError,
)


class _Occupier(Strategy):
    identifier = "occupier"

    def next_move(self, board):
        return Edge(0, 1)


def test_four_vertex_outerplanar_game_is_survived(outerplanar):
    transcript, result = play_game(4, outerplanar, RandomStrategy(), RandomStrategy(), 0)
    assert result == SURVIVED
    assert len(transcript.moves) == 6
    assert [p for p, _ in transcript.moves] == [Player.AVOIDER, Player.ENFORCER] * 3


def test_game_stops_at_the_first_losing_avoider_move(diamond):
    avoider = ScriptedStrategy([(0, 1), (1, 2), (0, 2), (2, 3), (1, 3)])
    enforcer = ScriptedStrategy([(4, 5), (4, 6), (5, 6), (3, 4)])
    transcript, result = play_game(8, diamond, avoider, enforcer, 0)
    assert result == GameResult.lost(5)
    assert transcript.moves[-1] == (Player.AVOIDER, Edge(1, 3))
    assert len(transcript.moves) == 9


def test_strategy_fault_names_the_move():
    family = GameFamily.outerplanar()
    with pytest.raises(StrategyFaultError) as info:
        play_game(5, family, ScriptedStrategy([(0, 1), (2, 3)]), _Occupier(), 0)
    assert info.value.move_index == 2
    assert info.value.strategy == "occupier"


def test_role_mismatch_is_rejected(outerplanar):
    with pytest.raises(ValueError):
        play_game(6, outerplanar, build_strategy("random", Player.AVOIDER), GreedyAvoider(), 0)


def test_role_streams_are_independent():
    a = stream_for(7, Player.AVOIDER).integers(1 << 30, size=4)
    e = stream_for(7, Player.ENFORCER).integers(1 << 30, size=4)
    again = stream_for(7, Player.AVOIDER).integers(1 << 30, size=4)
    assert a.tolist() == again.tolist()
    assert a.tolist() != e.tolist()


def test_loss_monitor_reports_only_the_first_loss(outerplanar):
    monitor = LossMonitor(5, outerplanar)
    k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    flags = [monitor.add(Edge(*e)) for e in k4]
    assert flags == [False] * 5 + [True]
    assert monitor.add(Edge(3, 4)) is False


@pytest.mark.parametrize("seed", range(6))
def test_games_are_deterministic(seed):
    family = [GameFamily.outerplanar(), GameFamily.diamond_free(), GameFamily.k_degenerate(2)][
        seed % 3
    ]
    n = 14 + seed
    first, _ = play_game(n, family, GreedyAvoider(), RandomStrategy(), seed)
    second, _ = play_game(n, family, GreedyAvoider(), RandomStrategy(), seed)
    assert first.to_json() == second.to_json()


def test_transcript_document_shape(degenerate1):
    transcript, result = play_game(6, degenerate1, GreedyAvoider(), RandomStrategy(), 3)
    document = json.loads(transcript.to_json())
    assert list(document)[:3] == ["version", "family", "k"]
    assert document["family"] == "kdegenerate"
    assert document["k"] == 1
    assert document["moves"][0] == {"p": "A", "e": [0, 1]}
    assert document["result"] == {"lost_at": result.loss_move}
    assert Transcript.from_json(transcript.to_json()) == transcript


def test_transcript_omits_k_and_empty_diagnostics(outerplanar, tmp_path):
    transcript, _ = play_game(4, outerplanar, RandomStrategy(), RandomStrategy(), 1)
    document = transcript.to_document()
    assert "k" not in document
    assert "diagnostics" not in document
    assert document["result"] == {"survived": True}
    path = tmp_path / "game.json"
    transcript.dump(path)
    assert Transcript.load(path) == transcript


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"version": 2}',
        '{"version": 1, "family": "outerplanar", "n": 4, "seed": -1, "avoider": "a",'
        ' "enforcer": "e", "moves": [], "result": {"survived": true}}',
        '{"version": 1, "family": "outerplanar", "n": 4, "seed": 0, "avoider": "a",'
        ' "enforcer": "e", "moves": [{"p": "X", "e": [0, 1]}], "result": {"survived": true}}',
        '{"version": 1, "family": "kdegenerate", "n": 4, "seed": 0, "avoider": "a",'
        ' "enforcer": "e", "moves": [], "result": {"survived": true}}',
    ],
)
def test_malformed_transcripts_are_rejected(text):
    with pytest.raises(TranscriptFormatError):
        Transcript.from_json(text)


@pytest.mark.slow
def test_random_configurations_replay_identically():
    rng = np.random.default_rng(7)
    avoiders = {
        "outerplanar": ["paper-op-avoider", "greedy-avoider", "random"],
        "diamond": ["paper-diamond-avoider", "greedy-avoider", "random"],
        "k-degenerate": ["paper-kdeg-avoider", "greedy-avoider", "random"],
    }
    enforcers = identifiers_for(Player.ENFORCER)
    for _ in range(100):
        kind = str(rng.choice(list(avoiders)))
        if kind == "outerplanar":
            family = GameFamily.outerplanar()
        elif kind == "diamond":
            family = GameFamily.diamond_free()
        else:
            family = GameFamily.k_degenerate(int(rng.integers(1, 4)))
        n = int(rng.integers(4, 40))
        avoider = str(rng.choice(avoiders[kind]))
        enforcer = str(rng.choice(enforcers))
        seed = int(rng.integers(2**31))
        runs = [
            play_game(
                n,
                family,
                build_strategy(avoider, Player.AVOIDER),
                build_strategy(enforcer, Player.ENFORCER),
                seed,
            )[0]
            for _ in range(2)
        ]
        assert runs[0].to_json() == runs[1].to_json()
        assert check_transcript(runs[0]).ok, (kind, n, avoider, enforcer, seed)
