"""Avoider strategy for the diamond-minor game.

Phase one builds two disjoint stars around the centres ``c1 = 0`` and
``c2 = 1`` (joined by an edge) until every vertex is a leaf. Phase two adds
two matchings, one inside each leaf set, so every matching edge closes a
triangle through its centre. The graph stays a cactus throughout.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, List, Optional, Set, Tuple

import networkx as nx
import numpy as np

from .board import Board, Edge, Player
from .properties import GameFamily, extremal
from .strategy import Strategy, is_safe_claim, own_move_number

MINIMUM_N = 12
MAX_UNSATURATED = 6
CENTERS = (0, 1)


class DiamondPhase(str, Enum):
    ONE = "one"
    TWO = "two"
    ENDGAME = "endgame"


def _count_enforcer_edges(board: Board, inside: Set[int], towards: Optional[Set[int]] = None) -> int:
    """Enforcer edges inside ``inside``, or between ``inside`` and ``towards``."""

    total = 0
    for x in inside:
        nbrs = board.neighbors(Player.ENFORCER, x)
        total += len(nbrs & (inside if towards is None else towards))
    return total // 2 if towards is None else total


def density(state: "DiamondAvoider", board: Board, i: int) -> Fraction:
    """Enforcer edge density of leaf set ``i`` (1 or 2).

    In phase one this is ``(|E(L_i)| + |E(L_i, R)|) / |L_i|``; afterwards the
    isolated set is empty and ``L_i`` is the shrinking live set.
    """

    idx = i - 1
    if state.phase is DiamondPhase.ONE:
        leaves, rest = state.leaves[idx], state.rest
    else:
        leaves, rest = state.live[idx], set()
    count = _count_enforcer_edges(board, leaves)
    if rest:
        count += _count_enforcer_edges(board, leaves, rest)
    return Fraction(count, max(len(leaves), 1))


class DiamondAvoider(Strategy):
    identifier = "paper-diamond-avoider"
    roles = frozenset({Player.AVOIDER})
    minimum_n = MINIMUM_N

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        super().reset(n, family, rng)
        self.phase = DiamondPhase.ONE
        self.leaves: Tuple[Set[int], Set[int]] = (set(), set())
        self.rest: Set[int] = set(range(2, n))
        self.live: Tuple[Set[int], Set[int]] = (set(), set())
        self.matched: Set[int] = set()
        self.dropped: Set[int] = set()
        self.unsaturated: Optional[int] = None

    @property
    def centers(self) -> Tuple[int, int]:
        return CENTERS

    # -- move selection ---------------------------------------------------

    def next_move(self, board: Board) -> Edge:
        move = own_move_number(board, Player.AVOIDER)
        if move == 1:
            e = Edge(*CENTERS)
            if not self.rest:
                self._start_phase_two()
            return e
        last = board.last_move(Player.ENFORCER)
        if self.phase is DiamondPhase.ONE:
            e = self._phase_one(board, last, move)
            if not self.rest:
                self._start_phase_two()
            self._check_density(board, move)
            return e
        if self.phase is DiamondPhase.TWO:
            e = self._phase_two(board, last)
            if e is not None:
                self._check_density(board, move)
                return e
            self._enter_endgame(board, move)
        return self._endgame(board)

    # -- phase one --------------------------------------------------------

    def _balance(self) -> int:
        return 0 if len(self.leaves[0]) <= len(self.leaves[1]) else 1

    def _heaviest_rest_vertex(self, board: Board, i: int) -> int:
        targets = self.leaves[i] | self.rest
        return min(
            self.rest,
            key=lambda w: (-len(board.neighbors(Player.ENFORCER, w) & targets), w),
        )

    def _phase_one(self, board: Board, last: Optional[Edge], move: int) -> Edge:
        if last is not None:
            u, v = last
            for i, c in enumerate(CENTERS):
                # R1: Enforcer took x c_i for an isolated x.
                if c in last and last.other(c) in self.rest:
                    return self._attach(board, last.other(c), 1 - i, move)
            for i in (0, 1):
                # R2: Enforcer joined L_i to an isolated vertex.
                for a, b in ((u, v), (v, u)):
                    if a in self.leaves[i] and b in self.rest:
                        return self._attach(board, b, 1 - i, move)
                # R3: Enforcer played inside L_i.
                if u in self.leaves[i] and v in self.leaves[i]:
                    return self._attach(board, self._heaviest_rest_vertex(board, i), i, move)
            # R4: Enforcer played inside R.
            if u in self.rest and v in self.rest:
                return self._attach(board, u, self._balance(), move)
        i = self._balance()
        return self._attach(board, self._heaviest_rest_vertex(board, i), i, move)

    def _attach(self, board: Board, x: int, i: int, move: int) -> Edge:
        for side in (i, 1 - i):
            if board.is_free(x, CENTERS[side]):
                if side != i:
                    self.diagnose(move, "center-edge-taken", f"vertex {x} moved to the other star")
                self.rest.discard(x)
                self.leaves[side].add(x)
                return Edge.of(x, CENTERS[side])
        self.diagnose(move, "stranded-vertex", f"vertex {x} lost both centre edges")
        self.rest.discard(x)
        self.dropped.add(x)
        if self.rest:
            j = self._balance()
            return self._attach(board, self._heaviest_rest_vertex(board, j), j, move)
        return self.safe_fallback(board)

    # -- phase two --------------------------------------------------------

    def _start_phase_two(self) -> None:
        self.phase = DiamondPhase.TWO
        self.live = (set(self.leaves[0]), set(self.leaves[1]))

    def _phase_two(self, board: Board, last: Optional[Edge]) -> Optional[Edge]:
        if last is not None and last.u in self.live[1] and last.v in self.live[1]:
            first = 1
        elif last is not None and last.u in self.live[0] and last.v in self.live[0]:
            first = 0
        else:
            first = 0 if len(self.live[0]) >= len(self.live[1]) else 1
        for i in (first, 1 - first):
            e = self._match_in(board, i)
            if e is not None:
                return e
        return None

    def _match_in(self, board: Board, i: int) -> Optional[Edge]:
        live = self.live[i]
        while len(live) >= 2:
            m = min(live, key=lambda x: (-len(board.neighbors(Player.ENFORCER, x) & live), x))
            partners = sorted(y for y in live if y != m and board.is_free(m, y))
            if partners:
                y = partners[0]
                live.discard(m)
                live.discard(y)
                self.matched.update((m, y))
                return Edge.of(m, y)
            live.discard(m)
            self.dropped.add(m)
        return None

    def _check_density(self, board: Board, move: int) -> None:
        for i in (1, 2):
            rho = density(self, board, i)
            self.bump_metric(f"max_density_{i}", float(rho))
            if rho > 1:
                self.violate(move, "density", f"density of leaf set {i} is {rho}")

    # -- endgame ----------------------------------------------------------

    def _enter_endgame(self, board: Board, move: int) -> None:
        self.phase = DiamondPhase.ENDGAME
        leaves = self.leaves[0] | self.leaves[1]
        self.unsaturated = len(leaves - self.matched)
        self.metrics["unsaturated"] = self.unsaturated
        if self.unsaturated > MAX_UNSATURATED:
            self.violate(move, "unsaturated", f"{self.unsaturated} leaves missed by both matchings")
        floor = extremal(self.family, self.n) - 3
        have = board.moves_made[Player.AVOIDER]
        if have < floor:
            self.violate(move, "final-size", f"only {have} edges before the endgame, expected {floor}")

    def _bridge_endpoints(self, board: Board) -> List[int]:
        graph = board.player_graph(Player.AVOIDER).to_networkx()
        return sorted({x for e in nx.bridges(graph) for x in e})

    def _endgame(self, board: Board) -> Edge:
        graph = board.player_graph(Player.AVOIDER)
        candidates = self._bridge_endpoints(board)
        # An edge whose cycle runs over bridges only closes one new cycle block.
        for e in _pairs(candidates):
            if board.is_unclaimed(e) and is_safe_claim(graph, self.family, e):
                return e
        return self.safe_fallback(board)


def _pairs(vertices: List[int]) -> Iterable[Edge]:
    for pos, p in enumerate(vertices):
        for q in vertices[pos + 1 :]:
            yield Edge(p, q)


__all__ = [
    "CENTERS",
    "DiamondAvoider",
    "DiamondPhase",
    "MAX_UNSATURATED",
    "MINIMUM_N",
    "density",
]
