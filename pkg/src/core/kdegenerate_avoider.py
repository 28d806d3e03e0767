"""Avoider strategy for the non-k-degeneracy game.

Phase one runs ``k`` subphases. In subphase ``i`` Avoider joins an anchor
``v_i`` to ``s_i = 3^(3k-i+1)`` vertices of the previous target set, which
become ``V_i``. The root set ``R = V_k + {v_1..v_k}`` then spans a k-degenerate
graph with the extremal number of edges. Every other vertex gets a list of
paired edges towards ``R`` (or ``R`` plus ``D``). Avoider answers each
Enforcer hit on a pair with its partner, so each vertex ends with exactly
``k`` earlier neighbours.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .board import UNCLAIMED, Board, Edge, Player, edge_at, edge_index
from .properties import DegeneracyCertificate, FamilyKind, GameFamily, extremal
from .strategy import GreedyAvoider, Strategy, own_move_number


class KDegeneratePhase(str, Enum):
    ONE = "one"
    PARTITION = "partition"
    TWO = "two"
    EXHAUSTED = "exhausted"
    GREEDY = "greedy"


def subphase_size(k: int, i: int) -> int:
    return 3 ** (3 * k - i + 1)


def minimum_order(k: int) -> int:
    """Smallest ``n`` for which the script is guaranteed feasible."""

    return 2 * 3 ** (3 * k + 1) + 1


def assignment_value(deg_avoider: int, deg_enforcer: int, root_size: int) -> Fraction:
    """``f(x) = deg_A(x,R) + (|R| - deg_E(x,R) - deg_A(x,R)) / 2``."""

    return deg_avoider + Fraction(root_size - deg_enforcer - deg_avoider, 2)


class KDegenerateAvoider(Strategy):
    identifier = "paper-kdeg-avoider"
    roles = frozenset({Player.AVOIDER})

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        self.k = family.k if family.kind is FamilyKind.K_DEGENERATE else 1
        self.minimum_n = minimum_order(self.k)
        super().reset(n, family, rng)
        self.sizes = [subphase_size(self.k, i) for i in range(1, self.k + 1)]
        self.phase = KDegeneratePhase.ONE
        self.anchors: List[int] = []
        self.targets: List[Set[int]] = []
        self._pool: Set[int] = set()
        self._chosen: List[int] = []
        self.root: Set[int] = set()
        self.dense: Set[int] = set()
        self.sparse: Set[int] = set()
        self.pairs: List[Tuple[int, int]] = []
        self._pair_of: Dict[int, int] = {}
        self._live: List[bool] = []
        self._next_pair = 0
        self.ordering: Tuple[int, ...] = ()
        self._position: Dict[int, int] = {}
        self._preceding: Dict[int, int] = {}
        self._greedy: Optional[GreedyAvoider] = None
        if n < self.minimum_n:
            self._switch_to_greedy(n, family, rng)

    @property
    def subphase(self) -> int:
        return len(self.anchors)

    def _switch_to_greedy(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        self.phase = KDegeneratePhase.GREEDY
        self._greedy = GreedyAvoider()
        self._greedy.reset(n, family, rng)

    # -- move selection ---------------------------------------------------

    def next_move(self, board: Board) -> Edge:
        move = own_move_number(board, Player.AVOIDER)
        if self.phase is KDegeneratePhase.ONE:
            e = self._phase_one(board, move)
            if e is not None:
                return e
        if self.phase is KDegeneratePhase.PARTITION:
            self._partition(board, move)
        if self.phase is KDegeneratePhase.TWO:
            e = self._phase_two(board, move)
            if e is not None:
                return e
            self._finish(board, move)
        if self.phase is KDegeneratePhase.GREEDY:
            return self._greedy.next_move(board)
        # Avoider's graph is now extremal; any edge completes a losing set.
        return self.fallback(board)

    # -- phase one --------------------------------------------------------

    def _start_subphase(self, board: Board, move: int) -> bool:
        i = self.subphase + 1
        enforcer = board.neighbors
        if i == 1:
            v = int(np.argmin(board.degrees[Player.ENFORCER]))
            pool = set(range(self.n)) - {v}
        else:
            previous = self.targets[-1]
            v = min(
                previous,
                key=lambda x: (len(enforcer(Player.ENFORCER, x) & previous), x),
            )
            pool = previous - {v}
        available = sum(1 for x in pool if board.is_free(v, x))
        self.metrics[f"feasible_{i}"] = available
        if available < 2 * self.sizes[i - 1]:
            self.violate(
                move,
                "feasibility",
                f"subphase {i} has {available} free targets, needs {2 * self.sizes[i - 1]}",
            )
        if available < self.sizes[i - 1]:
            return False
        self.anchors.append(v)
        self._pool = pool
        self._chosen = []
        return True

    def _phase_one(self, board: Board, move: int) -> Optional[Edge]:
        if not self._chosen and len(self.targets) == self.subphase:
            if not self._start_subphase(board, move):
                self.diagnose(move, "subphase-infeasible", "too few targets, playing greedily")
                self._switch_to_greedy(self.n, self.family, self.rng)
                return None
        i = self.subphase
        v = self.anchors[-1]
        indices = board.incident_indices(v)
        others = np.delete(np.arange(self.n), v)
        allowed = board.ownership[indices] == UNCLAIMED
        if i > 1:
            member = np.zeros(self.n, dtype=bool)
            member[list(self._pool)] = True
            allowed &= member[others]
        if not allowed.any():
            self.diagnose(move, "subphase-infeasible", f"anchor {v} ran out of targets")
            self._switch_to_greedy(self.n, self.family, self.rng)
            return None
        scores = np.where(allowed, board.degrees[Player.ENFORCER][others], np.iinfo(np.int64).max)
        x = int(others[int(np.argmin(scores))])
        self._chosen.append(x)
        if len(self._chosen) == self.sizes[i - 1]:
            self.targets.append(set(self._chosen))
            self._chosen = []
            if i == self.k:
                self.phase = KDegeneratePhase.PARTITION
        return Edge.of(v, x)

    # -- partition and pairing --------------------------------------------

    def _partition(self, board: Board, move: int) -> None:
        self.root = set(self.targets[-1]) | set(self.anchors)
        size = len(self.root)
        outside = [x for x in range(self.n) if x not in self.root]
        deg_avoider: Dict[int, int] = {}
        for x in outside:
            deg_a = len(board.neighbors(Player.AVOIDER, x) & self.root)
            deg_e = len(board.neighbors(Player.ENFORCER, x) & self.root)
            deg_avoider[x] = deg_a
            if assignment_value(deg_a, deg_e, size) >= self.k:
                self.dense.add(x)
            else:
                self.sparse.add(x)
        limit = 3 ** (3 * self.k + 1)
        self.metrics["sparse"] = len(self.sparse)
        if len(self.sparse) > limit:
            self.violate(move, "sparse-size", f"|F| = {len(self.sparse)} exceeds {limit}")

        root_sorted = sorted(self.root)
        wide_sorted = sorted(self.root | self.dense)
        for x in sorted(self.dense):
            self._add_pairs(board, x, root_sorted, 2 * (self.k - deg_avoider[x]), move)
        for x in sorted(self.sparse):
            self._add_pairs(board, x, wide_sorted, 2 * (self.k - deg_avoider[x]), move)

        self.ordering = (
            tuple(self.anchors)
            + tuple(sorted(self.targets[-1]))
            + tuple(sorted(self.dense))
            + tuple(sorted(self.sparse))
        )
        self._position = {v: p for p, v in enumerate(self.ordering)}
        self._preceding = {v: 0 for v in self.ordering}
        for v in self.ordering:
            for w in board.neighbors(Player.AVOIDER, v):
                if self._position[w] < self._position[v]:
                    self._preceding[v] += 1
        self.phase = KDegeneratePhase.TWO

    def _add_pairs(self, board: Board, x: int, towards: Sequence[int], need: int, move: int) -> None:
        if need <= 0:
            return
        free: List[int] = []
        for r in towards:
            if r != x and board.is_free(x, r):
                free.append(edge_index(self.n, Edge.of(x, r)))
                if len(free) == need:
                    break
        if len(free) < need:
            self.diagnose(move, "pairs-infeasible", f"vertex {x} has {len(free)} of {need} edges")
        for a, b in zip(free[0::2], free[1::2]):
            pair_id = len(self.pairs)
            self.pairs.append((a, b))
            self._pair_of[a] = pair_id
            self._pair_of[b] = pair_id
            self._live.append(True)

    # -- phase two --------------------------------------------------------

    def _claim(self, board: Board, idx: int, move: int) -> Edge:
        e = edge_at(self.n, idx)
        later = e.u if self._position[e.u] > self._position[e.v] else e.v
        self._preceding[later] += 1
        if self._preceding[later] > self.k:
            self.violate(move, "ordering-certificate", f"vertex {later} has more than {self.k} earlier neighbours")
        return e

    def _phase_two(self, board: Board, move: int) -> Optional[Edge]:
        last = board.last_move(Player.ENFORCER)
        if last is not None:
            hit = self._pair_of.get(edge_index(self.n, last))
            if hit is not None and self._live[hit]:
                self._live[hit] = False
                a, b = self.pairs[hit]
                mate = b if a == edge_index(self.n, last) else a
                if board.ownership[mate] == UNCLAIMED:
                    return self._claim(board, mate, move)
        while self._next_pair < len(self.pairs):
            pair_id = self._next_pair
            self._next_pair += 1
            if not self._live[pair_id]:
                continue
            self._live[pair_id] = False
            a, b = self.pairs[pair_id]
            for idx in (a, b):
                if board.ownership[idx] == UNCLAIMED:
                    return self._claim(board, idx, move)
        return None

    def _finish(self, board: Board, move: int) -> None:
        self.phase = KDegeneratePhase.EXHAUSTED
        graph = board.player_graph(Player.AVOIDER)
        certificate = DegeneracyCertificate(self.k, self.ordering)
        if len(self.ordering) == self.n and not certificate.verifies(graph):
            self.violate(move, "ordering-certificate", "final ordering does not witness k-degeneracy")
        self.metrics["edges"] = graph.edge_count
        bound = extremal(GameFamily.k_degenerate(self.k), self.n)
        self.metrics["extremal_gap"] = bound - graph.edge_count


__all__ = [
    "KDegenerateAvoider",
    "KDegeneratePhase",
    "assignment_value",
    "minimum_order",
    "subphase_size",
]
