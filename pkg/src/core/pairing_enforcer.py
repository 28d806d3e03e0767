"""Enforcer that blocks every triangle through one anchor edge."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .board import Board, Edge, Player, edge_at
from .properties import GameFamily
from .strategy import Strategy


def choose_anchor(board: Board) -> Edge:
    """Smallest edge avoiding Avoider's opening, else the smallest unclaimed edge."""

    opening = board.last_move(Player.AVOIDER)
    idx = board.first_unclaimed()
    while idx is not None:
        e = edge_at(board.n, idx)
        if opening is None or not (opening.touches(e.u) or opening.touches(e.v)):
            return e
        idx = board.first_unclaimed(idx + 1)
    return Strategy.fallback(board)


class PairingEnforcer(Strategy):
    """Pairs ``xu`` with ``xv`` for the anchor ``uv`` claimed on the first move.

    Whenever Avoider takes one edge of a pair, Enforcer takes the other, so
    Avoider never owns both ``xu`` and ``xv``. Other moves go to the lowest
    unclaimed edge away from the anchor, keeping the pairs intact.
    """

    identifier = "pairing-enforcer"
    roles = frozenset({Player.ENFORCER})
    minimum_n = 4

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        super().reset(n, family, rng)
        self.anchor: Optional[Edge] = None
        self._cursor = 0

    def partner(self, e: Edge) -> Optional[Edge]:
        """The pair mate of ``e``, or ``None`` when ``e`` is not in a pair."""

        if self.anchor is None:
            return None
        u, v = self.anchor
        for w, other in ((u, v), (v, u)):
            if e.touches(w) and not e.touches(other):
                return Edge.of(e.other(w), other)
        return None

    def next_move(self, board: Board) -> Edge:
        if self.anchor is None:
            self.anchor = choose_anchor(board)
            return self.anchor
        last = board.last_move(Player.AVOIDER)
        if last is not None:
            mate = self.partner(last)
            if mate is not None and board.is_unclaimed(mate):
                return mate
        return self._away_from_anchor(board)

    def _away_from_anchor(self, board: Board) -> Edge:
        idx = board.first_unclaimed(self._cursor)
        while idx is not None:
            e = edge_at(board.n, idx)
            if not (e.touches(self.anchor.u) or e.touches(self.anchor.v)):
                self._cursor = idx
                return e
            idx = board.first_unclaimed(idx + 1)
        self._cursor = board.size
        return self.fallback(board)


__all__ = ["PairingEnforcer", "choose_anchor"]
