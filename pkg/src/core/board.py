"""The shared board E(K_n) and the alternating-move protocol."""

from __future__ import annotations

from enum import Enum
from typing import Iterator, List, NamedTuple, Optional, Tuple

import numpy as np

from .properties import InvalidParameterError, SimpleGraph

UNCLAIMED = 0


class OccupiedEdgeError(ValueError):
    """Raised when a player claims an edge that is already owned."""


class ProtocolError(RuntimeError):
    """Raised when a claim violates the alternation A, E, A, E, ..."""


class Player(str, Enum):
    AVOIDER = "A"
    ENFORCER = "E"

    @property
    def code(self) -> int:
        return 1 if self is Player.AVOIDER else 2

    @property
    def opponent(self) -> "Player":
        return Player.ENFORCER if self is Player.AVOIDER else Player.AVOIDER


class Edge(NamedTuple):
    """Canonical edge with ``u < v``."""

    u: int
    v: int

    @classmethod
    def of(cls, a: int, b: int) -> "Edge":
        if a == b:
            raise InvalidParameterError(f"Loop ({a}, {b}) is not an edge of K_n")
        return cls(a, b) if a < b else cls(b, a)

    def other(self, endpoint: int) -> int:
        return self.v if endpoint == self.u else self.u

    def touches(self, vertex: int) -> bool:
        return vertex == self.u or vertex == self.v


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(n: int, e: Edge) -> int:
    """Row-major index of ``e`` among the C(n,2) edges."""

    u, v = e
    return u * n - u * (u + 1) // 2 + (v - u - 1)


def edge_at(n: int, index: int) -> Edge:
    # Row u starts at u*n - u(u+1)/2; solve for the last row start <= index.
    u = int((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * index)) // 2)
    while u > 0 and u * n - u * (u + 1) // 2 > index:
        u -= 1
    while (u + 1) * n - (u + 1) * (u + 2) // 2 <= index:
        u += 1
    start = u * n - u * (u + 1) // 2
    return Edge(u, u + 1 + index - start)


class Board:
    """Ownership of every edge of K_n plus the move history.

    Ownership lives in a flat ``int8`` array indexed by :func:`edge_index`;
    per-player neighbour sets and degree arrays are kept in step so strategies
    can query them in constant time.
    """

    def __init__(self, n: int) -> None:
        if n < 2:
            raise InvalidParameterError(f"Board needs n >= 2, got {n}")
        self.n = n
        self.size = edge_count(n)
        self.ownership = np.zeros(self.size, dtype=np.int8)
        self.history: List[Tuple[Player, Edge]] = []
        self.moves_made = {Player.AVOIDER: 0, Player.ENFORCER: 0}
        self._neighbors = {
            Player.AVOIDER: [set() for _ in range(n)],
            Player.ENFORCER: [set() for _ in range(n)],
        }
        self.degrees = {
            Player.AVOIDER: np.zeros(n, dtype=np.int64),
            Player.ENFORCER: np.zeros(n, dtype=np.int64),
        }

    # -- protocol ---------------------------------------------------------

    @property
    def to_move(self) -> Player:
        avoider, enforcer = self.moves_made[Player.AVOIDER], self.moves_made[Player.ENFORCER]
        return Player.AVOIDER if avoider == enforcer else Player.ENFORCER

    @property
    def unclaimed_count(self) -> int:
        return self.size - len(self.history)

    @property
    def is_full(self) -> bool:
        return len(self.history) == self.size

    def index(self, e: Edge) -> int:
        u, v = e
        if not (0 <= u < v < self.n):
            raise InvalidParameterError(f"Edge {tuple(e)} is not canonical on n={self.n}")
        return edge_index(self.n, e)

    def owner(self, e: Edge) -> Optional[Player]:
        code = int(self.ownership[self.index(e)])
        if code == UNCLAIMED:
            return None
        return Player.AVOIDER if code == Player.AVOIDER.code else Player.ENFORCER

    def owner_of(self, a: int, b: int) -> Optional[Player]:
        return self.owner(Edge.of(a, b))

    def is_unclaimed(self, e: Edge) -> bool:
        return int(self.ownership[self.index(e)]) == UNCLAIMED

    def is_free(self, a: int, b: int) -> bool:
        return a != b and int(self.ownership[edge_index(self.n, Edge.of(a, b))]) == UNCLAIMED

    def claim(self, player: Player, e: Edge) -> "Board":
        e = Edge(*e)
        if player is not self.to_move:
            raise ProtocolError(
                f"{player.name} tried to move at ply {len(self.history) + 1}, "
                f"but it is {self.to_move.name}'s turn"
            )
        idx = self.index(e)
        if int(self.ownership[idx]) != UNCLAIMED:
            raise OccupiedEdgeError(f"Edge {tuple(e)} is already owned by {self.owner(e).name}")
        self.ownership[idx] = player.code
        self.history.append((player, e))
        self.moves_made[player] += 1
        self._neighbors[player][e.u].add(e.v)
        self._neighbors[player][e.v].add(e.u)
        self.degrees[player][e.u] += 1
        self.degrees[player][e.v] += 1
        return self

    # -- queries ----------------------------------------------------------

    def degree(self, player: Player, v: int) -> int:
        return len(self._neighbors[player][v])

    def neighbors(self, player: Player, v: int) -> set[int]:
        """Live neighbour set; callers must not mutate it."""

        return self._neighbors[player][v]

    def last_move(self, player: Optional[Player] = None) -> Optional[Edge]:
        for mover, e in reversed(self.history):
            if player is None or mover is player:
                return e
        return None

    def player_graph(self, player: Player) -> SimpleGraph:
        graph = SimpleGraph(self.n)
        graph.adjacency = [set(nbrs) for nbrs in self._neighbors[player]]
        graph.edge_count = self.moves_made[player]
        return graph

    def incident_indices(self, v: int) -> np.ndarray:
        """Edge indices of ``v w`` for every ``w != v``, ordered by ``w``."""

        others = np.delete(np.arange(self.n), v)
        low = np.minimum(others, v)
        high = np.maximum(others, v)
        return low * self.n - low * (low + 1) // 2 + (high - low - 1)

    def unclaimed_edges(self) -> Iterator[Edge]:
        for idx in np.flatnonzero(self.ownership == UNCLAIMED):
            yield edge_at(self.n, int(idx))

    def first_unclaimed(self, start: int = 0) -> Optional[int]:
        """Lowest unclaimed edge index ``>= start``, scanning in growing windows."""

        window = 256
        while start < self.size:
            stop = min(self.size, start + window)
            hits = np.flatnonzero(self.ownership[start:stop] == UNCLAIMED)
            if hits.size:
                return start + int(hits[0])
            start = stop
            window *= 4
        return None


def new_board(n: int) -> Board:
    return Board(n)


def claim(board: Board, player: Player, e: Edge) -> Board:
    return board.claim(player, e)


def player_graph(board: Board, player: Player) -> SimpleGraph:
    return board.player_graph(player)


__all__ = [
    "Board",
    "Edge",
    "OccupiedEdgeError",
    "Player",
    "ProtocolError",
    "claim",
    "edge_at",
    "edge_count",
    "edge_index",
    "new_board",
    "player_graph",
]
