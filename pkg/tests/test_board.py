import numpy as np
import pytest

from core.board import (
    Board,
    Edge,
    OccupiedEdgeError,
    Player,
    ProtocolError,
    edge_at,
    edge_count,
    edge_index,
)
from core.properties import InvalidParameterError


def test_edge_index_is_row_major():
    assert edge_index(5, Edge(0, 1)) == 0
    assert edge_index(5, Edge(0, 4)) == 3
    assert edge_index(5, Edge(1, 2)) == 4
    assert edge_index(5, Edge(3, 4)) == edge_count(5) - 1


def test_edge_at_inverts_index_on_large_board():
    n = 4500
    for idx in (0, 1, n - 2, n - 1, 123_456, edge_count(n) - 1):
        assert edge_index(n, edge_at(n, idx)) == idx


def test_edge_of_canonicalises_and_rejects_loops():
    assert Edge.of(4, 2) == Edge(2, 4)
    with pytest.raises(InvalidParameterError):
        Edge.of(3, 3)


def test_new_board_is_empty_and_avoider_moves_first():
    board = Board(6)
    assert board.size == 15
    assert board.unclaimed_count == 15
    assert board.to_move is Player.AVOIDER
    assert not board.is_full


def test_claim_updates_owner_and_degrees():
    board = Board(5)
    board.claim(Player.AVOIDER, Edge(0, 2))
    board.claim(Player.ENFORCER, Edge(2, 3))
    assert board.owner(Edge(0, 2)) is Player.AVOIDER
    assert board.owner_of(3, 2) is Player.ENFORCER
    assert board.owner(Edge(0, 1)) is None
    assert board.degree(Player.AVOIDER, 2) == 1
    assert board.neighbors(Player.ENFORCER, 3) == {2}
    assert board.degrees[Player.AVOIDER].tolist() == [1, 0, 1, 0, 0]
    assert board.last_move() == Edge(2, 3)
    assert board.last_move(Player.AVOIDER) == Edge(0, 2)


def test_claiming_an_owned_edge_fails():
    board = Board(4)
    board.claim(Player.AVOIDER, Edge(0, 1))
    with pytest.raises(OccupiedEdgeError):
        board.claim(Player.ENFORCER, Edge(0, 1))


def test_claim_out_of_turn_fails():
    board = Board(4)
    with pytest.raises(ProtocolError):
        board.claim(Player.ENFORCER, Edge(0, 1))


def test_non_canonical_edge_is_rejected():
    board = Board(4)
    with pytest.raises(InvalidParameterError):
        board.claim(Player.AVOIDER, Edge(2, 1))
    with pytest.raises(InvalidParameterError):
        board.claim(Player.AVOIDER, Edge(1, 4))


def test_board_needs_two_vertices():
    with pytest.raises(InvalidParameterError):
        Board(1)


def test_player_graph_contains_only_own_edges(play_moves):
    board = play_moves(5, [(0, 1), (1, 2), (0, 3), (2, 4)])
    avoider = board.player_graph(Player.AVOIDER)
    assert sorted(avoider.edges()) == [(0, 1), (0, 3)]
    assert avoider.edge_count == 2
    enforcer = board.player_graph(Player.ENFORCER)
    assert sorted(enforcer.edges()) == [(1, 2), (2, 4)]


def test_incident_indices_follow_neighbour_order():
    board = Board(6)
    indices = board.incident_indices(3)
    expected = [edge_index(6, Edge.of(3, w)) for w in (0, 1, 2, 4, 5)]
    assert indices.tolist() == expected


def test_first_unclaimed_skips_owned_prefix(play_moves):
    board = play_moves(5, [(0, 1), (0, 2), (0, 3)])
    assert board.first_unclaimed() == 3
    assert board.first_unclaimed(4) == 4
    assert list(board.unclaimed_edges())[0] == Edge(0, 4)


def test_full_board_reports_full(play_moves):
    moves = [edge_at(4, i) for i in range(6)]
    board = play_moves(4, moves)
    assert board.is_full
    assert board.first_unclaimed() is None
    assert np.count_nonzero(board.ownership == Player.AVOIDER.code) == 3
