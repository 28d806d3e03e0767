"""Exact optimal-play values for small boards by memoised game-tree search.

Positions are pairs of edge bitmasks. A position where Avoider's edges are
losing is terminal with the number of Avoider moves as its value; an
exhausted board without a loss is worth infinity. Avoider maximises,
Enforcer minimises, and each side stops searching once it has the best
value it could possibly get.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from . import settings
from .board import Edge, edge_at, edge_count, edge_index
from .properties import (
    CapacityError,
    GameFamily,
    InvalidParameterError,
    SimpleGraph,
    is_losing,
    tau_bounds,
)

logger = logging.getLogger(__name__)

MAX_SOLVER_N = 6
INFINITE = 1 << 30


@dataclass(frozen=True)
class Position:
    avoider_mask: int = 0
    enforcer_mask: int = 0

    def __post_init__(self) -> None:
        if self.avoider_mask & self.enforcer_mask:
            raise InvalidParameterError("Avoider and Enforcer masks overlap")
        diff = self.avoider_mask.bit_count() - self.enforcer_mask.bit_count()
        if diff not in (0, 1):
            raise InvalidParameterError("Move counts do not follow the alternation")

    @property
    def avoider_to_move(self) -> bool:
        return self.avoider_mask.bit_count() == self.enforcer_mask.bit_count()


@dataclass(frozen=True)
class GameValue:
    """``moves`` is ``None`` when Avoider wins (the value is infinite)."""

    moves: Optional[int] = None

    @property
    def is_infinite(self) -> bool:
        return self.moves is None

    @classmethod
    def from_raw(cls, raw: int) -> "GameValue":
        return cls(None if raw >= INFINITE else raw)

    def __str__(self) -> str:
        return "infinite" if self.is_infinite else str(self.moves)


@dataclass(frozen=True)
class Relation1Report:
    family: GameFamily
    n: int
    value: GameValue
    lower: int
    upper: int
    passed: bool
    note: str = ""

    def lines(self) -> List[str]:
        verdict = "pass" if self.passed else "FAIL"
        text = [
            f"family={self.family} n={self.n} tau={self.value}",
            f"bounds=({self.lower}, {self.upper}) {verdict}",
        ]
        if self.note:
            text.append(self.note)
        return text


def _permutation_tables(n: int) -> np.ndarray:
    """``tables[p, i]`` is the bit weight of edge ``i`` under vertex permutation ``p``."""

    edges = [edge_at(n, i) for i in range(edge_count(n))]
    rows = []
    for perm in itertools.permutations(range(n)):
        rows.append([1 << edge_index(n, Edge.of(perm[u], perm[v])) for u, v in edges])
    return np.array(rows, dtype=np.int64)


class Solver:
    """Memoised search for one ``(family, n)``; reusable across queries."""

    def __init__(
        self,
        family: GameFamily,
        n: int,
        memo_limit: Optional[int] = None,
        canonical: bool = False,
    ) -> None:
        if n < 2:
            raise InvalidParameterError(f"Board needs n >= 2, got {n}")
        if n > MAX_SOLVER_N:
            raise CapacityError(f"Exact search is limited to n <= {MAX_SOLVER_N}, got {n}")
        self.family = family
        self.n = n
        self.size = edge_count(n)
        self.full = (1 << self.size) - 1
        self.memo_limit = memo_limit if memo_limit is not None else settings.solver_memo_limit()
        self.memo: Dict[Tuple[int, int], int] = {}
        self._losing: Dict[int, bool] = {}
        self._edges = [edge_at(n, i) for i in range(self.size)]
        self._tables = _permutation_tables(n) if canonical else None
        self._bits = np.array([1 << i for i in range(self.size)], dtype=np.int64)

    # -- helpers ----------------------------------------------------------

    def graph_of(self, mask: int) -> SimpleGraph:
        return SimpleGraph(self.n, (self._edges[i] for i in range(self.size) if mask >> i & 1))

    def losing(self, avoider_mask: int) -> bool:
        cached = self._losing.get(avoider_mask)
        if cached is None:
            cached = is_losing(self.graph_of(avoider_mask), self.family)
            self._losing[avoider_mask] = cached
        return cached

    def _key(self, a: int, e: int) -> Tuple[int, int]:
        if self._tables is None:
            return a, e
        a_bits = (self._bits & a) != 0
        e_bits = (self._bits & e) != 0
        a_perm = (self._tables * a_bits).sum(axis=1)
        e_perm = (self._tables * e_bits).sum(axis=1)
        combined = a_perm * (1 << self.size) + e_perm
        best = int(np.argmin(combined))
        return int(a_perm[best]), int(e_perm[best])

    # -- search -----------------------------------------------------------

    def value(self, a: int = 0, e: int = 0) -> int:
        key = self._key(a, e)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        free = self.full & ~(a | e)
        if free == 0:
            result = INFINITE
        elif a.bit_count() == e.bit_count():
            result = -1
            made = a.bit_count() + 1
            for bit in _bits_of(free):
                child = a | bit
                score = made if self.losing(child) else self.value(child, e)
                result = max(result, score)
                if result >= INFINITE:
                    break
        else:
            result = INFINITE
            floor = a.bit_count() + 1
            for bit in _bits_of(free):
                result = min(result, self.value(a, e | bit))
                if result <= floor:
                    break
        if len(self.memo) >= self.memo_limit:
            raise CapacityError(f"Solver memo exceeded {self.memo_limit} positions")
        self.memo[key] = result
        return result

    def value_of(self, position: Position) -> GameValue:
        if self.losing(position.avoider_mask):
            return GameValue(position.avoider_mask.bit_count())
        return GameValue.from_raw(self.value(position.avoider_mask, position.enforcer_mask))

    def principal_variation(self) -> List[Edge]:
        """Optimal line from the empty board, lowest edge index on ties."""

        a = e = 0
        line: List[Edge] = []
        target = self.value(a, e)
        while True:
            free = self.full & ~(a | e)
            if free == 0:
                return line
            avoider_turn = a.bit_count() == e.bit_count()
            for bit in _bits_of(free):
                if avoider_turn:
                    child = a | bit
                    if self.losing(child):
                        if a.bit_count() + 1 == target:
                            line.append(self._edges[bit.bit_length() - 1])
                            return line
                        continue
                    if self.value(child, e) == target:
                        a = child
                        break
                elif self.value(a, e | bit) == target:
                    e |= bit
                    break
            else:
                raise RuntimeError("No move reproduces the solved value")
            line.append(self._edges[bit.bit_length() - 1])


def _bits_of(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def _solve_child(
    family: GameFamily, n: int, a: int, memo_limit: int, canonical: bool
) -> int:
    solver = Solver(family, n, memo_limit=memo_limit, canonical=canonical)
    if solver.losing(a):
        return 1
    return solver.value(a, 0)


def solve_tau(
    family: GameFamily,
    n: int,
    memo_limit: Optional[int] = None,
    canonical: bool = False,
    workers: int = 1,
) -> GameValue:
    limit = memo_limit if memo_limit is not None else settings.solver_memo_limit()
    if workers <= 1:
        return GameValue.from_raw(Solver(family, n, memo_limit=limit, canonical=canonical).value())
    # Root-parallel: each worker owns a private memo for one opening move.
    size = edge_count(n)
    openings = [1 << i for i in range(size)]
    logger.debug("Solving %s n=%d across %d workers", family, n, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        values = list(
            pool.map(
                _solve_child,
                [family] * size,
                [n] * size,
                openings,
                [limit] * size,
                [canonical] * size,
            )
        )
    return GameValue.from_raw(max(values))


def principal_variation(family: GameFamily, n: int, memo_limit: Optional[int] = None) -> List[Edge]:
    return Solver(family, n, memo_limit=memo_limit).principal_variation()


def verify_relation1(
    family: GameFamily,
    n: int,
    memo_limit: Optional[int] = None,
    canonical: bool = False,
    workers: int = 1,
) -> Relation1Report:
    value = solve_tau(family, n, memo_limit=memo_limit, canonical=canonical, workers=workers)
    lower, upper = tau_bounds(family, n)
    if value.is_infinite:
        return Relation1Report(family, n, value, lower, upper, True, "Avoider wins; bounds hold vacuously")
    passed = lower <= value.moves <= upper
    return Relation1Report(family, n, value, lower, upper, passed)


__all__ = [
    "CapacityError",
    "GameValue",
    "INFINITE",
    "MAX_SOLVER_N",
    "Position",
    "Relation1Report",
    "Solver",
    "principal_variation",
    "solve_tau",
    "verify_relation1",
]
