"""Common contract for move generators plus the baseline opponents."""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from typing import Dict, FrozenSet, List, Optional, Sequence

import networkx as nx
import numpy as np

from .board import UNCLAIMED, Board, Edge, Player, edge_at
from .properties import GameFamily, SimpleGraph, edge_completes_losing_set
from .transcript import Diagnostic

logger = logging.getLogger(__name__)

BOTH_ROLES: FrozenSet[Player] = frozenset({Player.AVOIDER, Player.ENFORCER})


class Strategy(ABC):
    """Stateful move generator for one player.

    ``reset`` is called once per game before the first move; ``next_move`` is
    then called on every turn of the owning player and must return an
    unclaimed edge. Scripted strategies never raise when their preconditions
    fail: they record a :class:`Diagnostic` and play a safe legal move.
    Monitored invariants that break are recorded in ``violations``.
    """

    identifier: str = "strategy"
    roles: FrozenSet[Player] = BOTH_ROLES
    minimum_n: int = 2

    def __init__(self) -> None:
        self.n = 0
        self.family: Optional[GameFamily] = None
        self.rng = np.random.default_rng(0)
        self.diagnostics: List[Diagnostic] = []
        self.violations: List[Diagnostic] = []
        self.metrics: Dict[str, float] = {}

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        self.n = n
        self.family = family
        self.rng = rng
        self.diagnostics = []
        self.violations = []
        self.metrics = {}
        if n < self.minimum_n:
            self.diagnose(0, "below-minimum-n", f"n={n} is below {self.minimum_n}")

    @abstractmethod
    def next_move(self, board: Board) -> Edge:
        """Return an unclaimed edge for the player whose turn it is."""

    def diagnose(self, move: int, code: str, message: str) -> None:
        logger.warning("%s move %d: %s (%s)", self.identifier, move, message, code)
        self.diagnostics.append(Diagnostic(move, code, message))

    def violate(self, move: int, code: str, message: str) -> None:
        if self.n < self.minimum_n:
            # Guarantees only hold from minimum_n on.
            self.diagnose(move, code, message)
            return
        logger.warning("%s move %d violated %s: %s", self.identifier, move, code, message)
        self.violations.append(Diagnostic(move, code, message))

    def bump_metric(self, name: str, value: float) -> None:
        self.metrics[name] = max(self.metrics.get(name, value), value)

    @staticmethod
    def fallback(board: Board) -> Edge:
        idx = board.first_unclaimed()
        if idx is None:
            raise RuntimeError("No unclaimed edge left on the board")
        return edge_at(board.n, idx)

    @staticmethod
    def safe_fallback(board: Board) -> Edge:
        """An edge that cannot close a cycle in Avoider's graph, if one is left.

        Pendant edges at Avoider-isolated vertices come first, then edges
        joining two of his components; otherwise the lowest unclaimed edge.
        """

        degrees = board.degrees[Player.AVOIDER]
        for v in np.flatnonzero(degrees == 0):
            indices = board.incident_indices(int(v))
            free = np.flatnonzero(board.ownership[indices] == UNCLAIMED)
            if free.size:
                return edge_at(board.n, int(indices[free[0]]))
        component = np.zeros(board.n, dtype=np.int64)
        graph = board.player_graph(Player.AVOIDER).to_networkx()
        for label, members in enumerate(nx.connected_components(graph)):
            component[list(members)] = label
        for u in range(board.n - 1):
            indices = board.incident_indices(u)[u:]
            free = (board.ownership[indices] == UNCLAIMED) & (component[u + 1 :] != component[u])
            hits = np.flatnonzero(free)
            if hits.size:
                return Edge(u, u + 1 + int(hits[0]))
        return Strategy.fallback(board)


def own_move_number(board: Board, player: Player) -> int:
    """1-based index of the move ``player`` is about to make."""

    return board.moves_made[player] + 1


def is_safe_claim(graph: SimpleGraph, family: GameFamily, e: Edge) -> bool:
    """True when adding ``e`` keeps a non-losing ``graph`` non-losing."""

    graph.add_edge(e.u, e.v)
    try:
        return not edge_completes_losing_set(graph, family, e.u, e.v)
    finally:
        graph.remove_edge(e.u, e.v)


class ScriptedStrategy(Strategy):
    """Replays a fixed list of moves, for principal variations and fixtures."""

    identifier = "scripted"

    def __init__(self, moves: Sequence[Edge]) -> None:
        super().__init__()
        self.moves = [Edge(*e) for e in moves]
        self._cursor = 0

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        super().reset(n, family, rng)
        self._cursor = 0

    def next_move(self, board: Board) -> Edge:
        if self._cursor >= len(self.moves):
            self.diagnose(self._cursor + 1, "script-exhausted", "no scripted move left")
            return self.fallback(board)
        e = self.moves[self._cursor]
        self._cursor += 1
        return e


class RandomStrategy(Strategy):
    """Uniform choice among unclaimed edges from the seeded stream."""

    identifier = "random"

    def next_move(self, board: Board) -> Edge:
        # Rejection sampling while the board is mostly empty, exact draw after.
        if board.unclaimed_count * 2 >= board.size:
            while True:
                idx = int(self.rng.integers(board.size))
                if board.ownership[idx] == UNCLAIMED:
                    return edge_at(board.n, idx)
        free = np.flatnonzero(board.ownership == UNCLAIMED)
        return edge_at(board.n, int(free[self.rng.integers(free.size)]))


class GreedyAvoider(Strategy):
    """Lowest-index edge that keeps Avoider's graph non-losing."""

    identifier = "greedy-avoider"
    roles = frozenset({Player.AVOIDER})

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        super().reset(n, family, rng)
        # Loss is monotone, so an edge that loses once loses for good.
        self._doomed: set[int] = set()

    def next_move(self, board: Board) -> Edge:
        graph = board.player_graph(Player.AVOIDER)
        idx = board.first_unclaimed()
        while idx is not None:
            if idx not in self._doomed:
                e = edge_at(board.n, idx)
                if is_safe_claim(graph, self.family, e):
                    return e
                self._doomed.add(idx)
            idx = board.first_unclaimed(idx + 1)
        return self.fallback(board)


class SaboteurEnforcer(Strategy):
    """Claims the edge whose endpoints have the largest Avoider degree sum."""

    identifier = "saboteur-enforcer"
    roles = frozenset({Player.ENFORCER})

    def next_move(self, board: Board) -> Edge:
        degrees = board.degrees[Player.AVOIDER]
        order = np.argsort(-degrees, kind="stable")
        best = -1
        # Scan pairs in descending degree order; stop once no pair can beat best.
        for a_pos, a in enumerate(order):
            da = int(degrees[a])
            if a_pos + 1 < len(order) and da + int(degrees[order[a_pos + 1]]) <= best:
                break
            for b in order[a_pos + 1 :]:
                total = da + int(degrees[b])
                if total <= best:
                    break
                if board.is_free(int(a), int(b)):
                    best = total
                    break
        if best < 0:
            return self.fallback(board)
        # Lowest-index edge attaining the best sum.
        n = board.n
        needed = best - degrees
        for u in np.flatnonzero(np.isin(needed, degrees)):
            u = int(u)
            partners = np.flatnonzero(degrees[u + 1 :] == needed[u]) + u + 1
            if partners.size == 0:
                continue
            indices = u * n - u * (u + 1) // 2 + (partners - u - 1)
            free = np.flatnonzero(board.ownership[indices] == UNCLAIMED)
            if free.size:
                return Edge(u, int(partners[free[0]]))
        return self.fallback(board)


__all__ = [
    "BOTH_ROLES",
    "GreedyAvoider",
    "RandomStrategy",
    "SaboteurEnforcer",
    "ScriptedStrategy",
    "Strategy",
    "is_safe_claim",
    "own_move_number",
]
