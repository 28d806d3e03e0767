import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.properties import (
    ORACLE_MAX_VERTICES,
    CapacityError,
    SimpleGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    degeneracy,
    diamond_graph,
    has_core,
    has_minor_oracle,
    is_diamond_minor_free,
    is_k_degenerate,
    is_outerplanar,
    triangulated_polygon,
)

K4 = complete_graph(4)
K23 = complete_bipartite_graph(2, 3)
DIAMOND = diamond_graph()


def outerplanar_by_oracle(graph: SimpleGraph) -> bool:
    return not has_minor_oracle(graph, K4) and not has_minor_oracle(graph, K23)


def _assert_degeneracy_is_least(graph: SimpleGraph) -> None:
    certificate = degeneracy(graph)
    assert certificate.verifies(graph)
    assert is_k_degenerate(graph, certificate.k)
    if certificate.k > 0:
        assert has_core(graph, certificate.k)
        assert not is_k_degenerate(graph, certificate.k - 1)


@st.composite
def small_graphs(draw, min_n=2, max_n=7):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph(n, (p for p, keep in zip(pairs, mask) if keep))


def test_oracle_on_named_graphs():
    assert has_minor_oracle(complete_graph(5), K4)
    assert has_minor_oracle(complete_bipartite_graph(3, 3), K4)
    assert not has_minor_oracle(triangulated_polygon(6), K4)
    assert not has_minor_oracle(cycle_graph(6), DIAMOND)
    assert has_minor_oracle(K23, DIAMOND)


def test_oracle_refuses_large_graphs():
    with pytest.raises(CapacityError):
        has_minor_oracle(SimpleGraph(ORACLE_MAX_VERTICES + 1), K4)


@settings(max_examples=80, deadline=None)
@given(small_graphs())
def test_checkers_agree_with_oracle(graph):
    assert is_outerplanar(graph) == outerplanar_by_oracle(graph)
    assert is_diamond_minor_free(graph) == (not has_minor_oracle(graph, DIAMOND))
    assert degeneracy(graph).verifies(graph)
    _assert_degeneracy_is_least(graph)
    if is_diamond_minor_free(graph):
        assert is_outerplanar(graph)
    if is_outerplanar(graph):
        assert degeneracy(graph).k <= 2


@pytest.mark.slow
def test_checkers_agree_with_oracle_on_every_six_vertex_graph():
    pairs = list(itertools.combinations(range(6), 2))
    for mask in range(1 << len(pairs)):
        graph = SimpleGraph(6, (p for i, p in enumerate(pairs) if mask >> i & 1))
        assert is_outerplanar(graph) == outerplanar_by_oracle(graph), graph
        assert is_diamond_minor_free(graph) == (not has_minor_oracle(graph, DIAMOND)), graph


@pytest.mark.slow
def test_checkers_agree_with_oracle_on_random_graphs_up_to_nine_vertices():
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        n = int(rng.integers(7, ORACLE_MAX_VERTICES + 1))
        pairs = list(itertools.combinations(range(n), 2))
        keep = rng.random(len(pairs)) < rng.uniform(0.15, 0.6)
        graph = SimpleGraph(n, (p for p, k in zip(pairs, keep) if k))
        assert is_outerplanar(graph) == outerplanar_by_oracle(graph), graph
        assert is_diamond_minor_free(graph) == (not has_minor_oracle(graph, DIAMOND)), graph
        _assert_degeneracy_is_least(graph)
