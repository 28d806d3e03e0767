"""Avoider strategy for the non-outerplanarity game.

Avoider grows a core that is always one edge ``m`` short of a maximal
outerplanar graph. Every other vertex stays isolated in his graph until it is
attached to two consecutive vertices of the core's outer face. A vertex is
*good* while some three consecutive face vertices are all free of Enforcer
edges to it, and such a vertex can always be attached. Avoider attaches the
good vertex with the highest Enforcer degree first. Bad vertices are handled
in the endgame with pendant edges and, where possible, one more triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .board import Board, Edge, Player, edge_at
from .properties import GameFamily, SimpleGraph
from .strategy import Strategy, is_safe_claim, own_move_number

MINIMUM_N = 50
MAX_BAD_VERTICES = 5


class Phase(str, Enum):
    BOOTSTRAP = "bootstrap"
    GROW_EARLY = "grow-early"
    REDUCE_BAD = "reduce-bad"
    GROW_LATE = "grow-late"
    ENDGAME = "endgame"


class VertexClass(str, Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True)
class Extension:
    """Vertex ``v`` joined to ``v2`` and about to be joined to ``v1`` or ``v3``."""

    v: int
    v1: int
    v2: int
    v3: int


def classify_vertex(face: Sequence[int], board: Board, v: int) -> VertexClass:
    """Bad iff every three consecutive face vertices include an Enforcer neighbour of ``v``."""

    enforcer = board.neighbors(Player.ENFORCER, v)
    length = len(face)
    marked = [x in enforcer for x in face]
    if length < 3:
        return VertexClass.BAD if any(marked) else VertexClass.GOOD
    for i in range(length):
        if not (marked[i] or marked[(i + 1) % length] or marked[(i + 2) % length]):
            return VertexClass.GOOD
    return VertexClass.BAD


def free_triple(face: Sequence[int], board: Board, v: int, start: int = 0) -> Optional[int]:
    """First position ``i`` (cyclically from ``start``) with ``v`` free to face[i..i+2]."""

    length = len(face)
    free = [board.is_free(v, x) for x in face]
    for step in range(length):
        i = (start + step) % length
        if free[i] and free[(i + 1) % length] and free[(i + 2) % length]:
            return i
    return None


def face_blocks(face: Sequence[int], marks: Set[int]) -> Tuple[List[int], List[int]]:
    """Block id and block length for every face edge ``face[j] face[j+1]``.

    The marked face vertices cut the cyclic face into maximal paths; each
    face edge belongs to exactly one of them.
    """

    length = len(face)
    positions = [j for j, x in enumerate(face) if x in marks]
    if not positions:
        return [0] * length, [length] * length
    ids = [0] * length
    lengths = [0] * length
    for t, start in enumerate(positions):
        stop = positions[(t + 1) % len(positions)]
        size = (stop - start) % length or length
        for step in range(size):
            j = (start + step) % length
            ids[j] = t
            lengths[j] = size
    return ids, lengths


def find_reduction(face: Sequence[int], bad_marks: Sequence[Set[int]]) -> Optional[Tuple[int, int, int]]:
    """Consecutive face vertices ``(w1, w2, w3)`` for the bad-vertex reduction.

    Looks for a face edge ``e`` whose blocks satisfy ``sum 1/|f_i(e)| < 2`` and
    an adjacent face edge ``f`` lying in the same block as ``e`` for at least
    two bad vertices. ``e`` and ``f`` share ``w2``.
    """

    length = len(face)
    if length < 3:
        return None
    blocks = [face_blocks(face, marks) for marks in bad_marks]
    for j in range(length):
        if sum((Fraction(1, lengths[j]) for _, lengths in blocks), Fraction(0)) >= 2:
            continue
        for f in ((j + 1) % length, (j - 1) % length):
            shared = sum(1 for ids, _ in blocks if ids[f] == ids[j])
            if shared < 2:
                continue
            if f == (j + 1) % length:
                return face[j], face[(j + 1) % length], face[(j + 2) % length]
            return face[(j - 1) % length], face[j], face[(j + 1) % length]
    return None


class OuterplanarAvoider(Strategy):
    identifier = "paper-op-avoider"
    roles = frozenset({Player.AVOIDER})
    minimum_n = MINIMUM_N

    def reset(self, n: int, family: GameFamily, rng: np.random.Generator) -> None:
        super().reset(n, family, rng)
        self.face: List[int] = []
        self.in_core = np.zeros(n, dtype=bool)
        self.m: Optional[Edge] = None
        self.phase = Phase.BOOTSTRAP
        self.pending: Optional[Extension] = None
        self.bad: Set[int] = set()
        self.box_limit = 4 * math.log(n) if n > 1 else 0.0
        self._rotor = 0
        self._reduce_checked = False
        self._reducing = False
        self._reduce_finished = False
        self._box_reported = False
        self._pendants: Dict[int, int] = {}
        self._doomed: Set[int] = set()

    # -- public helpers ---------------------------------------------------

    @property
    def core_order(self) -> int:
        return len(self.face)

    def classify(self, board: Board, v: int) -> VertexClass:
        return classify_vertex(self.face, board, v)

    # -- move selection ---------------------------------------------------

    def next_move(self, board: Board) -> Edge:
        move = own_move_number(board, Player.AVOIDER)
        if self.pending is not None:
            e = self._finish_extension(board, move)
            if e is not None:
                return e
        if self.phase is Phase.BOOTSTRAP:
            return self._bootstrap(board, move)

        if self.phase is not Phase.ENDGAME:
            self._check_core(board, move)
        good, bad = self._split(board)
        self.bad = bad
        self._monitor(move, good, board)

        quarter = -(-self.n // 4)
        if not self._reduce_checked and self.core_order >= quarter:
            self._reduce_checked = True
            if len(bad) == MAX_BAD_VERTICES:
                e = self._reduce_bad(board, move)
                if e is not None:
                    return e

        if good:
            degrees = board.degrees[Player.ENFORCER]
            v = min(good, key=lambda x: (-int(degrees[x]), x))
            if self.phase is not Phase.ENDGAME:
                self.phase = Phase.GROW_EARLY if self.core_order < quarter else Phase.GROW_LATE
            return self._start_extension(board, v, move)

        self.phase = Phase.ENDGAME
        return self._endgame(board, move)

    def _bootstrap(self, board: Board, move: int) -> Edge:
        if move == 1 and board.is_free(0, 1):
            return Edge(0, 1)
        enforcer = board.degrees[Player.ENFORCER]
        candidates = [c for c in range(2, self.n) if board.is_free(1, c)]
        untouched = [c for c in candidates if enforcer[c] == 0]
        if move != 2 or board.owner_of(0, 1) is not Player.AVOIDER or not candidates:
            self.diagnose(move, "bootstrap-failed", "no triangle could be started")
            self.phase = Phase.ENDGAME
            return self.safe_fallback(board)
        c = (untouched or candidates)[0]
        self.face = [0, 1, c]
        self.in_core[[0, 1, c]] = True
        self.m = Edge(0, c)
        self.phase = Phase.GROW_EARLY
        return Edge(1, c)

    def _split(self, board: Board) -> Tuple[List[int], Set[int]]:
        avoider = board.degrees[Player.AVOIDER]
        enforcer = board.degrees[Player.ENFORCER]
        isolated = np.flatnonzero(~self.in_core & (avoider == 0))
        good: List[int] = []
        bad: Set[int] = set()
        length = self.core_order
        for v in isolated:
            v = int(v)
            # Fewer than L/3 marks cannot hit all L consecutive triples.
            if 3 * int(enforcer[v]) < length or self.classify(board, v) is VertexClass.GOOD:
                good.append(v)
            else:
                bad.add(v)
        return good, bad

    def _monitor(self, move: int, good: List[int], board: Board) -> None:
        self.bump_metric("max_bad", len(self.bad))
        if len(self.bad) > MAX_BAD_VERTICES:
            self.violate(move, "bad-vertices", f"{len(self.bad)} bad vertices")
        if self._reduce_finished:
            self._reduce_finished = False
            self.metrics["bad_after_reduction"] = len(self.bad)
            if len(self.bad) > MAX_BAD_VERTICES - 1:
                self.violate(move, "bad-vertices", f"{len(self.bad)} bad vertices after reduction")
        if good:
            top = int(board.degrees[Player.ENFORCER][good].max())
            self.bump_metric("max_good_enforcer_degree", top)
            if top > self.box_limit and not self._box_reported:
                self._box_reported = True
                self.diagnose(move, "box-degree", f"good vertex with Enforcer degree {top}")

    def _check_core(self, board: Board, move: int) -> None:
        if not self.face:
            return
        avoider = board.degrees[Player.AVOIDER]
        expected = 2 * self.core_order - 4
        outside = int(avoider[~self.in_core].sum())
        if board.moves_made[Player.AVOIDER] != expected or outside:
            self.violate(
                move,
                "core-structure",
                f"{board.moves_made[Player.AVOIDER]} edges on a core of order {self.core_order}",
            )

    # -- extensions -------------------------------------------------------

    def _start_extension(self, board: Board, v: int, move: int) -> Edge:
        i = free_triple(self.face, board, v, self._rotor)
        if i is None:
            self.diagnose(move, "no-free-triple", f"vertex {v} has no free triple")
            return self.safe_fallback(board)
        length = self.core_order
        v1, v2, v3 = self.face[i], self.face[(i + 1) % length], self.face[(i + 2) % length]
        self._rotor = (i + 2) % length
        self.pending = Extension(v, v1, v2, v3)
        return Edge.of(v, v2)

    def _finish_extension(self, board: Board, move: int) -> Optional[Edge]:
        ext, self.pending = self.pending, None
        reducing, self._reducing = self._reducing, False
        options = ((ext.v1, True), (ext.v3, False))
        graph = board.player_graph(Player.AVOIDER) if self.phase is Phase.ENDGAME else None
        for w, before in options:
            e = Edge.of(ext.v, w)
            if not board.is_unclaimed(e):
                continue
            if graph is not None and not is_safe_claim(graph, self.family, e):
                continue
            pos = self.face.index(ext.v2)
            self.face.insert(pos if before else pos + 1, ext.v)
            self.in_core[ext.v] = True
            if reducing:
                self._reduce_finished = True
            return e
        self.diagnose(move, "extension-blocked", f"vertex {ext.v} could not close its triangle")
        if self.phase is not Phase.ENDGAME:
            self._pendants[ext.v] = ext.v2
            self.phase = Phase.ENDGAME
        return None

    def _reduce_bad(self, board: Board, move: int) -> Optional[Edge]:
        self.phase = Phase.REDUCE_BAD
        marks = [board.neighbors(Player.ENFORCER, b) for b in sorted(self.bad)]
        triple = find_reduction(self.face, marks)
        if triple is None:
            self.diagnose(move, "reduce-no-edge", "no face edge with block sum below 2")
            return None
        untouched = np.flatnonzero(
            ~self.in_core
            & (board.degrees[Player.AVOIDER] == 0)
            & (board.degrees[Player.ENFORCER] == 0)
        )
        if untouched.size == 0:
            self.diagnose(move, "reduce-no-vertex", "no vertex isolated for both players")
            return None
        u = int(untouched[0])
        w1, w2, w3 = triple
        self.pending = Extension(u, w1, w2, w3)
        self._reducing = True
        return Edge.of(u, w2)

    # -- endgame ----------------------------------------------------------

    def _endgame(self, board: Board, move: int) -> Edge:
        graph = board.player_graph(Player.AVOIDER)
        length = self.core_order
        loose = [int(v) for v in np.flatnonzero(~self.in_core & (board.degrees[Player.AVOIDER] == 0))]

        # Pendant edges from isolated vertices never lose; prefer a spot with a free face neighbour.
        for b in loose:
            for j, x in enumerate(self.face):
                if not board.is_free(b, x):
                    continue
                if board.is_free(b, self.face[j - 1]) or board.is_free(b, self.face[(j + 1) % length]):
                    self._pendants[b] = x
                    return Edge.of(b, x)
        for b in loose:
            for x in [*self.face, *range(self.n)]:
                if x != b and board.is_free(b, x):
                    if x in self.face:
                        self._pendants[b] = x
                    return Edge.of(b, x)

        for b, x in sorted(self._pendants.items()):
            if self.in_core[b] or graph.degree(b) != 1 or x not in self.face:
                continue
            j = self.face.index(x)
            for y_pos, before in (((j + 1) % length, False), ((j - 1) % length, True)):
                y = self.face[y_pos]
                e = Edge.of(b, y)
                if board.is_unclaimed(e) and is_safe_claim(graph, self.family, e):
                    self.face.insert(j if before else j + 1, b)
                    self.in_core[b] = True
                    return e

        if self.m is not None:
            if board.is_unclaimed(self.m) and is_safe_claim(graph, self.family, self.m):
                return self.m
            # The other diagonal of the quadrilateral around m.
            apexes = sorted(set(graph.adjacency[self.m.u]) & set(graph.adjacency[self.m.v]))
            for a_pos, p in enumerate(apexes):
                for q in apexes[a_pos + 1 :]:
                    e = Edge(p, q)
                    if board.is_unclaimed(e) and is_safe_claim(graph, self.family, e):
                        return e

        safe = self._any_safe_edge(board, graph)
        return safe if safe is not None else self.fallback(board)

    def _any_safe_edge(self, board: Board, graph: SimpleGraph) -> Optional[Edge]:
        """Lowest unclaimed edge keeping Avoider's graph outerplanar."""

        screen = self._core_screen(board, graph)
        idx = board.first_unclaimed()
        while idx is not None:
            current, idx = idx, board.first_unclaimed(idx + 1)
            if current in self._doomed:
                continue
            e = edge_at(board.n, current)
            in_core = self.in_core[e.u] and self.in_core[e.v]
            if (screen is None or not in_core or screen(e)) and is_safe_claim(graph, self.family, e):
                return e
            # Loss is monotone: an unsafe edge stays unsafe.
            self._doomed.add(current)
        return None

    def _core_screen(self, board: Board, graph: SimpleGraph) -> Optional[Callable[[Edge], bool]]:
        """Necessary condition for a core pair to be safe, or ``None`` if unknown.

        With every face edge owned, the face is the core's only Hamiltonian
        cycle and a new chord must not cross an old one. With one face edge
        ``xy`` missing from a core of ``2L - 4`` edges, the core is a maximal
        outerplanar graph minus ``xy``; a safe pair then lies among ``x``,
        ``y`` and the face neighbours of their common neighbour.
        """

        face, length = self.face, self.core_order
        if length < 4:
            return None
        position = {x: i for i, x in enumerate(face)}
        missing = [
            (face[i], face[(i + 1) % length])
            for i in range(length)
            if board.owner_of(face[i], face[(i + 1) % length]) is not Player.AVOIDER
        ]
        chords = [
            (position[u], position[v])
            for u in face
            for v in graph.adjacency[u]
            if v in position
            and position[u] < position[v]
            and (position[v] - position[u]) % length not in (1, length - 1)
        ]
        starts = np.array([a for a, _ in chords], dtype=np.int64)
        stops = np.array([b for _, b in chords], dtype=np.int64)

        def crosses(e: Edge) -> bool:
            a, b = sorted((position[e.u], position[e.v]))
            hits = ((a < starts) & (starts < b) & (b < stops)) | (
                (starts < a) & (a < stops) & (stops < b)
            )
            return bool(hits.any())

        if not missing:
            return lambda e: not crosses(e)
        if len(missing) > 1 or len(chords) != length - 3:
            return None
        if any(crosses(Edge(face[a], face[b])) for a, b in chords):
            return None
        x, y = missing[0]
        common = [w for w in graph.adjacency[x] & graph.adjacency[y] if w in position]
        if len(common) != 1:
            return None
        j = position[common[0]]
        allowed = {x, y, face[(j - 1) % length], face[(j + 1) % length]}
        return lambda e: e.u in allowed and e.v in allowed


__all__ = [
    "Extension",
    "MINIMUM_N",
    "OuterplanarAvoider",
    "Phase",
    "VertexClass",
    "classify_vertex",
    "face_blocks",
    "find_reduction",
    "free_triple",
]
