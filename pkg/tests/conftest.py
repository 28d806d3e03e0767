from typing import Callable, Iterable, Sequence, Tuple

import pytest

from core.board import Board, Edge, Player
from core.properties import GameFamily

Pairs = Sequence[Tuple[int, int]]


@pytest.fixture()
def outerplanar() -> GameFamily:
    return GameFamily.outerplanar()


@pytest.fixture()
def diamond() -> GameFamily:
    return GameFamily.diamond_free()


@pytest.fixture()
def degenerate1() -> GameFamily:
    return GameFamily.k_degenerate(1)


def _play_moves(n: int, moves: Iterable[Tuple[int, int]]) -> Board:
    board = Board(n)
    for u, v in moves:
        board.claim(board.to_move, Edge.of(u, v))
    return board


def _board_with(n: int, avoider: Pairs, enforcer: Pairs) -> Board:
    board = Board(n)
    for i in range(len(avoider)):
        board.claim(Player.AVOIDER, Edge.of(*avoider[i]))
        if i < len(enforcer):
            board.claim(Player.ENFORCER, Edge.of(*enforcer[i]))
    return board


@pytest.fixture()
def play_moves() -> Callable[[int, Iterable[Tuple[int, int]]], Board]:
    """Board after the given moves, alternating from Avoider."""

    return _play_moves


@pytest.fixture()
def board_with() -> Callable[[int, Pairs, Pairs], Board]:
    """Interleave Avoider and Enforcer edge lists, Avoider first."""

    return _board_with
