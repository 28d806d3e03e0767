"""Game loop: alternate the two strategies and stop at Avoider's first loss."""

from __future__ import annotations

import logging
from typing import Tuple

import numpy as np

from .board import Board, Edge, OccupiedEdgeError, Player
from .properties import (
    GameFamily,
    InvalidParameterError,
    SimpleGraph,
    edge_completes_losing_set,
)
from .strategy import Strategy
from .transcript import SURVIVED, GameResult, Transcript

logger = logging.getLogger(__name__)

ROLE_TAGS = {Player.AVOIDER: 0, Player.ENFORCER: 1}


class StrategyFaultError(RuntimeError):
    """A strategy returned an edge that is not a legal move."""

    def __init__(self, strategy: str, move_index: int, edge: object, reason: str) -> None:
        super().__init__(
            f"Strategy {strategy!r} made an illegal move {edge!r} at ply {move_index}: {reason}"
        )
        self.strategy = strategy
        self.move_index = move_index
        self.edge = edge


class LossMonitor:
    """Tracks Avoider's graph and reports the move that first makes it losing.

    Exact as long as it sees every Avoider edge in order: the previous graph
    is known to be non-losing, so only structure through the new edge needs
    to be examined.
    """

    def __init__(self, n: int, family: GameFamily) -> None:
        self.family = family
        self.graph = SimpleGraph(n)
        self.lost = False

    def add(self, e: Edge) -> bool:
        self.graph.add_edge(e.u, e.v)
        if not self.lost and edge_completes_losing_set(self.graph, self.family, e.u, e.v):
            self.lost = True
            return True
        return False


def stream_for(seed: int, player: Player) -> np.random.Generator:
    """Independent random stream for one role, split from the game seed."""

    return np.random.default_rng([seed, ROLE_TAGS[player]])


def _checked_move(strategy: Strategy, board: Board) -> Edge:
    ply = len(board.history) + 1
    raw = strategy.next_move(board)
    try:
        u, v = raw
        e = Edge(int(u), int(v))
        if not board.is_unclaimed(e):
            raise OccupiedEdgeError(f"{tuple(e)} is already owned")
    except (TypeError, ValueError) as exc:
        raise StrategyFaultError(strategy.identifier, ply, raw, str(exc)) from exc
    return e


def play_game(
    n: int,
    family: GameFamily,
    avoider: Strategy,
    enforcer: Strategy,
    seed: int,
) -> Tuple[Transcript, GameResult]:
    if Player.AVOIDER not in avoider.roles:
        raise InvalidParameterError(f"{avoider.identifier} cannot play Avoider")
    if Player.ENFORCER not in enforcer.roles:
        raise InvalidParameterError(f"{enforcer.identifier} cannot play Enforcer")
    board = Board(n)
    avoider.reset(n, family, stream_for(seed, Player.AVOIDER))
    enforcer.reset(n, family, stream_for(seed, Player.ENFORCER))
    monitor = LossMonitor(n, family)
    logger.debug("Game start: %s n=%d seed=%d", family, n, seed)

    result = SURVIVED
    while not board.is_full:
        player = board.to_move
        strategy = avoider if player is Player.AVOIDER else enforcer
        e = _checked_move(strategy, board)
        board.claim(player, e)
        if player is Player.AVOIDER and monitor.add(e):
            result = GameResult.lost(board.moves_made[Player.AVOIDER])
            break

    diagnostics = sorted(
        [*avoider.diagnostics, *avoider.violations, *enforcer.diagnostics, *enforcer.violations],
        key=lambda d: d.move,
    )
    transcript = Transcript(
        family=family,
        n=n,
        seed=seed,
        avoider=avoider.identifier,
        enforcer=enforcer.identifier,
        moves=tuple(board.history),
        result=result,
        diagnostics=tuple(diagnostics),
    )
    logger.debug("Game end: %s n=%d seed=%d result=%s", family, n, seed, result)
    return transcript, result


__all__ = [
    "LossMonitor",
    "ROLE_TAGS",
    "StrategyFaultError",
    "play_game",
    "stream_for",
]
