"""Losing-set families, graph property checks and extremal numbers.

The three families are monotone increasing: once Avoider's graph is losing it
stays losing. Every check here is a pure function of its inputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms import isomorphism

ORACLE_MAX_VERTICES = 9


class InvalidParameterError(ValueError):
    """Raised when a board size, family parameter or range is out of bounds."""


class CapacityError(RuntimeError):
    """Raised when an exhaustive computation would exceed its configured capacity."""


class SimpleGraph:
    """Undirected simple graph on vertices ``0..n-1`` backed by neighbour sets."""

    __slots__ = ("n", "adjacency", "edge_count")

    def __init__(self, n: int, edges: Iterable[Tuple[int, int]] = ()) -> None:
        if n < 0:
            raise InvalidParameterError(f"Vertex count must be non-negative, got {n}")
        self.n = n
        self.adjacency: List[set[int]] = [set() for _ in range(n)]
        self.edge_count = 0
        for u, v in edges:
            self.add_edge(u, v)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "SimpleGraph":
        return cls(n, edges)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise InvalidParameterError(f"Vertex {v} outside 0..{self.n - 1}")

    def add_edge(self, u: int, v: int) -> None:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise InvalidParameterError(f"Loop at vertex {u} is not allowed")
        if v in self.adjacency[u]:
            raise InvalidParameterError(f"Edge ({u}, {v}) already present")
        self.adjacency[u].add(v)
        self.adjacency[v].add(u)
        self.edge_count += 1

    def remove_edge(self, u: int, v: int) -> None:
        if v not in self.adjacency[u]:
            raise InvalidParameterError(f"Edge ({u}, {v}) not present")
        self.adjacency[u].discard(v)
        self.adjacency[v].discard(u)
        self.edge_count -= 1

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted(self.adjacency[v]))

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    def copy(self) -> "SimpleGraph":
        clone = SimpleGraph(self.n)
        clone.adjacency = [set(nbrs) for nbrs in self.adjacency]
        clone.edge_count = self.edge_count
        return clone

    def relabel(self, permutation: Sequence[int]) -> "SimpleGraph":
        """Return the graph with vertex ``v`` renamed to ``permutation[v]``."""

        return SimpleGraph(self.n, ((permutation[u], permutation[v]) for u, v in self.edges()))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges())
        return graph

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, edges={self.edges()})"


class FamilyKind(str, Enum):
    OUTERPLANAR = "outerplanar"
    DIAMOND_FREE = "diamond"
    K_DEGENERATE = "kdegenerate"


@dataclass(frozen=True)
class GameFamily:
    """Which family of losing sets is in force."""

    kind: FamilyKind
    k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is FamilyKind.K_DEGENERATE:
            if self.k is None or self.k < 1:
                raise InvalidParameterError(f"k-degenerate family needs k >= 1, got {self.k}")
        elif self.k is not None:
            raise InvalidParameterError("k is only meaningful for the k-degenerate family")

    @classmethod
    def outerplanar(cls) -> "GameFamily":
        return cls(FamilyKind.OUTERPLANAR)

    @classmethod
    def diamond_free(cls) -> "GameFamily":
        return cls(FamilyKind.DIAMOND_FREE)

    @classmethod
    def k_degenerate(cls, k: int) -> "GameFamily":
        return cls(FamilyKind.K_DEGENERATE, k)

    @classmethod
    def from_descriptor(cls, name: str, k: Optional[int] = None) -> "GameFamily":
        try:
            kind = FamilyKind(name.strip().lower())
        except ValueError as exc:
            raise InvalidParameterError(f"Unknown family {name!r}") from exc
        return cls(kind, k if kind is FamilyKind.K_DEGENERATE else None)

    @property
    def descriptor(self) -> str:
        return self.kind.value

    def __str__(self) -> str:
        if self.kind is FamilyKind.K_DEGENERATE:
            return f"{self.kind.value}(k={self.k})"
        return self.kind.value


@dataclass(frozen=True)
class DegeneracyCertificate:
    k: int
    ordering: Tuple[int, ...]

    def max_preceding_neighbors(self, g: SimpleGraph) -> int:
        position = {v: i for i, v in enumerate(self.ordering)}
        worst = 0
        for v in self.ordering:
            preceding = sum(1 for w in g.adjacency[v] if position[w] < position[v])
            worst = max(worst, preceding)
        return worst

    def verifies(self, g: SimpleGraph) -> bool:
        return (
            sorted(self.ordering) == list(range(g.n))
            and self.max_preceding_neighbors(g) <= self.k
        )


# ---------------------------------------------------------------------------
# Degeneracy


def degeneracy(g: SimpleGraph) -> DegeneracyCertificate:
    """Iterated minimum-degree removal; ties go to the lowest vertex index."""

    degrees = [g.degree(v) for v in range(g.n)]
    heap = [(degrees[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    removed = [False] * g.n
    removal_order: List[int] = []
    k = 0
    while heap:
        deg, v = heapq.heappop(heap)
        if removed[v] or deg != degrees[v]:
            continue
        removed[v] = True
        removal_order.append(v)
        k = max(k, deg)
        for w in g.adjacency[v]:
            if not removed[w]:
                degrees[w] -= 1
                heapq.heappush(heap, (degrees[w], w))
    return DegeneracyCertificate(k=k, ordering=tuple(reversed(removal_order)))


def has_core(g: SimpleGraph, c: int, candidates: Optional[Iterable[int]] = None) -> bool:
    """True iff ``g`` has a non-empty subgraph of minimum degree at least ``c``."""

    pool = set(candidates) if candidates is not None else set(range(g.n))
    alive = {v for v in pool if g.degree(v) >= c}
    inner = {v: len(g.adjacency[v] & alive) for v in alive}
    stack = [v for v, d in inner.items() if d < c]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.adjacency[v]:
            if w in alive:
                inner[w] -= 1
                if inner[w] == c - 1:
                    stack.append(w)
    return bool(alive)


def is_k_degenerate(g: SimpleGraph, k: int) -> bool:
    return not has_core(g, k + 1)


# ---------------------------------------------------------------------------
# Block-based checks


def _block_edge_lists(g: SimpleGraph) -> Iterator[List[Tuple[int, int]]]:
    graph = g.to_networkx()
    yield from nx.biconnected_component_edges(graph)


def _block_is_outerplanar(edges: Sequence[Tuple[int, int]]) -> bool:
    vertices = {x for edge in edges for x in edge}
    nv, ne = len(vertices), len(edges)
    if nv <= 3 or ne == nv:
        return True
    if ne > 2 * nv - 3:
        return False
    # An apex joined to every vertex keeps the graph planar iff it was outerplanar.
    apexed = nx.Graph(edges)
    apex = ("apex",)
    apexed.add_edges_from((apex, v) for v in vertices)
    planar, _ = nx.check_planarity(apexed)
    return bool(planar)


def is_outerplanar(g: SimpleGraph) -> bool:
    """True iff ``g`` has neither a K_4 nor a K_{2,3} minor."""

    if g.n >= 2 and g.edge_count > 2 * g.n - 3:
        return False
    return all(_block_is_outerplanar(edges) for edges in _block_edge_lists(g))


def is_diamond_minor_free(g: SimpleGraph) -> bool:
    """Cactus test: every block is a single edge or a cycle."""

    for edges in _block_edge_lists(g):
        vertices = {x for edge in edges for x in edge}
        if len(edges) > len(vertices):
            return False
    return True


def is_losing(g: SimpleGraph, family: GameFamily) -> bool:
    if family.kind is FamilyKind.OUTERPLANAR:
        return not is_outerplanar(g)
    if family.kind is FamilyKind.DIAMOND_FREE:
        return not is_diamond_minor_free(g)
    return degeneracy(g).k > family.k


def _component_of(g: SimpleGraph, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def block_containing_edge(g: SimpleGraph, u: int, v: int) -> Optional[List[Tuple[int, int]]]:
    """Edges of the block holding ``uv``, or ``None`` when ``uv`` is a bridge."""

    if g.degree(u) == 1 or g.degree(v) == 1:
        return None
    component = _component_of(g, u)
    graph = nx.Graph()
    graph.add_edges_from((a, b) for a in component for b in g.adjacency[a] if a < b)
    for edges in nx.biconnected_component_edges(graph):
        if len(edges) < 2:
            continue
        for a, b in edges:
            if (a == u and b == v) or (a == v and b == u):
                return list(edges)
    return None


def edge_completes_losing_set(g: SimpleGraph, family: GameFamily, u: int, v: int) -> bool:
    """Exact loss test for ``g`` assuming ``g`` minus ``uv`` is not losing.

    Any newly created losing structure must use ``uv``, so only the block
    containing it (or, for degeneracy, the core through both endpoints) is
    examined.
    """

    if family.kind is FamilyKind.K_DEGENERATE:
        if min(g.degree(u), g.degree(v)) <= family.k:
            return False
        return has_core(g, family.k + 1)
    block = block_containing_edge(g, u, v)
    if block is None:
        return False
    if family.kind is FamilyKind.DIAMOND_FREE:
        return len(block) > len({x for edge in block for x in edge})
    return not _block_is_outerplanar(block)


# ---------------------------------------------------------------------------
# Extremal numbers and move-count bounds


def extremal(family: GameFamily, n: int) -> int:
    if n < 2:
        raise InvalidParameterError(f"Board needs n >= 2, got {n}")
    if family.kind is FamilyKind.OUTERPLANAR:
        return 2 * n - 3
    if family.kind is FamilyKind.DIAMOND_FREE:
        return -(-(3 * n - 5) // 2)
    k = family.k
    if n < k + 1:
        raise InvalidParameterError(f"k-degenerate extremal number needs n >= k+1 (n={n}, k={k})")
    return (n - k) * k + k * (k - 1) // 2


def max_avoidable_edges(family: GameFamily, n: int) -> int:
    """Largest edge count of a non-losing graph on ``n`` vertices.

    Equals :func:`extremal` except for diamond-free boards of odd order, where
    a chain of triangles glued at cut vertices has ``3(n-1)/2`` edges, one
    more than the closed formula.
    """

    ex = extremal(family, n)
    if family.kind is FamilyKind.DIAMOND_FREE:
        return max(ex, 3 * (n - 1) // 2)
    return ex


def tau_bounds(family: GameFamily, n: int) -> Tuple[int, int]:
    ex = extremal(family, n)
    return -(-ex // 2) + 1, ex + 1


def theorem_lower_bound(family: GameFamily, n: int) -> int:
    """Family-specific survival guarantee of the scripted Avoider strategies."""

    ex = extremal(family, n)
    if family.kind is FamilyKind.OUTERPLANAR:
        return 2 * n - 7
    if family.kind is FamilyKind.DIAMOND_FREE:
        return ex - 2
    return ex + 1


# ---------------------------------------------------------------------------
# Brute-force minor oracle


def _canonical_key(vertices: FrozenSet[int], edges: FrozenSet[Tuple[int, int]]) -> Tuple:
    degree: Dict[int, int] = {v: 0 for v in vertices}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    neighbour_degrees: Dict[int, List[int]] = {v: [] for v in vertices}
    for a, b in edges:
        neighbour_degrees[a].append(degree[b])
        neighbour_degrees[b].append(degree[a])
    order = sorted(vertices, key=lambda v: (degree[v], sorted(neighbour_degrees[v]), v))
    label = {v: i for i, v in enumerate(order)}
    relabelled = sorted(tuple(sorted((label[a], label[b]))) for a, b in edges)
    return len(vertices), tuple(relabelled)


def has_minor_oracle(g: SimpleGraph, h: SimpleGraph) -> bool:
    """Exact minor test by exhaustive deletion/contraction search.

    Exponential; restricted to graphs ``g`` on at most ``ORACLE_MAX_VERTICES``
    vertices.
    """

    if g.n > ORACLE_MAX_VERTICES:
        raise CapacityError(
            f"Minor oracle limited to {ORACLE_MAX_VERTICES} vertices, got {g.n}"
        )
    pattern = h.to_networkx()
    h_vertices, h_edges = h.n, h.edge_count
    h_min_degree = min((h.degree(v) for v in range(h.n)), default=0)
    memo: Dict[Tuple, bool] = {}

    def prune(vertices: set[int], edges: set[Tuple[int, int]]) -> None:
        if h_min_degree < 1:
            return
        threshold = 1 if h_min_degree >= 2 else 0
        changed = True
        while changed:
            changed = False
            degree = {v: 0 for v in vertices}
            for a, b in edges:
                degree[a] += 1
                degree[b] += 1
            for v, d in degree.items():
                if d <= threshold and len(vertices) > h_vertices:
                    vertices.discard(v)
                    for edge in [e for e in edges if v in e]:
                        edges.discard(edge)
                    changed = True
                    break

    def search(vertices: FrozenSet[int], edges: FrozenSet[Tuple[int, int]]) -> bool:
        vs, es = set(vertices), set(edges)
        prune(vs, es)
        if len(vs) < h_vertices or len(es) < h_edges:
            return False
        key = _canonical_key(frozenset(vs), frozenset(es))
        if key in memo:
            return memo[key]
        host = nx.Graph()
        host.add_nodes_from(vs)
        host.add_edges_from(es)
        found = isomorphism.GraphMatcher(host, pattern).subgraph_is_monomorphic()
        if not found and len(vs) > h_vertices:
            for v in sorted(vs):
                remaining = frozenset(e for e in es if v not in e)
                if search(frozenset(vs - {v}), remaining):
                    found = True
                    break
            if not found:
                for a, b in sorted(es):
                    merged = set()
                    for x, y in es:
                        if (x, y) == (a, b):
                            continue
                        x, y = (a if x == b else x), (a if y == b else y)
                        if x != y:
                            merged.add((min(x, y), max(x, y)))
                    if search(frozenset(vs - {b}), frozenset(merged)):
                        found = True
                        break
        memo[key] = found
        return found

    return search(frozenset(range(g.n)), frozenset(g.edges()))


# ---------------------------------------------------------------------------
# Named graphs


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, ((u, v) for u in range(n) for v in range(u + 1, n)))


def complete_bipartite_graph(a: int, b: int) -> SimpleGraph:
    return SimpleGraph(a + b, ((u, a + v) for u in range(a) for v in range(b)))


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, ((i, (i + 1) % n) for i in range(n)))


def diamond_graph() -> SimpleGraph:
    return SimpleGraph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])


def triangulated_polygon(n: int) -> SimpleGraph:
    """Maximal outerplanar fan: the ``n``-cycle with every chord from vertex 0."""

    graph = SimpleGraph(n, ((i, i + 1) for i in range(n - 1)))
    if n >= 3:
        for v in range(2, n):
            graph.add_edge(0, v)
    return graph


def triangle_chain(n: int) -> SimpleGraph:
    """Triangles glued at cut vertices along a path, plus a pendant edge for even ``n``.

    Has ``extremal(diamond_free, n)`` edges for even ``n`` and one more for odd ``n``.
    """

    graph = SimpleGraph(n)
    last = 0
    nxt = 1
    while nxt + 1 < n:
        graph.add_edge(last, nxt)
        graph.add_edge(nxt, nxt + 1)
        graph.add_edge(last, nxt + 1)
        last = nxt + 1
        nxt += 2
    if nxt < n:
        graph.add_edge(last, nxt)
    return graph


def clique_join_independent(n: int, k: int) -> SimpleGraph:
    """K_k joined to an independent set of ``n - k`` vertices."""

    graph = complete_graph(k)
    graph = SimpleGraph(n, graph.edges())
    for v in range(k, n):
        for u in range(k):
            graph.add_edge(u, v)
    return graph


# ---------------------------------------------------------------------------
# Edge-list exchange format


def parse_edge_list(text: str) -> SimpleGraph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; blank lines are ignored."""

    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 2:
        raise InvalidParameterError("Edge list must start with a 'n m' header line")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        pairs = [(int(parts[0]), int(parts[1])) for parts in lines[1:] if len(parts) == 2]
    except ValueError as exc:
        raise InvalidParameterError(f"Non-integer token in edge list: {exc}") from exc
    if len(pairs) != len(lines) - 1:
        raise InvalidParameterError("Every edge line must hold exactly two vertices")
    if len(pairs) != m:
        raise InvalidParameterError(f"Header announces {m} edges but {len(pairs)} found")
    for u, v in pairs:
        if not u < v:
            raise InvalidParameterError(f"Edge ({u}, {v}) is not in canonical u<v form")
    return SimpleGraph(n, pairs)


def format_edge_list(g: SimpleGraph) -> str:
    rows = [f"{g.n} {g.edge_count}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(rows) + "\n"


__all__ = [
    "CapacityError",
    "DegeneracyCertificate",
    "FamilyKind",
    "GameFamily",
    "InvalidParameterError",
    "ORACLE_MAX_VERTICES",
    "SimpleGraph",
    "block_containing_edge",
    "clique_join_independent",
    "complete_bipartite_graph",
    "complete_graph",
    "cycle_graph",
    "degeneracy",
    "diamond_graph",
    "edge_completes_losing_set",
    "extremal",
    "format_edge_list",
    "has_core",
    "has_minor_oracle",
    "is_diamond_minor_free",
    "is_k_degenerate",
    "is_losing",
    "is_outerplanar",
    "max_avoidable_edges",
    "parse_edge_list",
    "tau_bounds",
    "theorem_lower_bound",
    "triangle_chain",
    "triangulated_polygon",
]
