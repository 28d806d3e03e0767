import itertools
import math

import pytest

from core.board import Edge, edge_index
from core.engine import play_game
from core.properties import (
    CapacityError,
    GameFamily,
    InvalidParameterError,
    SimpleGraph,
    is_losing,
    tau_bounds,
)
from core.solver import (
    GameValue,
    Position,
    Solver,
    principal_variation,
    solve_tau,
    verify_relation1,
)
from core.strategy import ScriptedStrategy


@pytest.mark.parametrize(
    "family, n",
    [
        (GameFamily.outerplanar(), 4),
        (GameFamily.diamond_free(), 4),
        (GameFamily.outerplanar(), 5),
        (GameFamily.k_degenerate(1), 4),
    ],
)
def test_small_boards_are_avoider_wins(family, n):
    value = solve_tau(family, n)
    assert value.is_infinite
    assert str(value) == "infinite"


def test_forest_game_on_five_vertices_is_finite_and_within_bounds():
    family = GameFamily.k_degenerate(1)
    value = solve_tau(family, 5)
    lower, upper = tau_bounds(family, 5)
    assert (lower, upper) == (3, 5)
    assert not value.is_infinite
    assert lower <= value.moves <= upper
    report = verify_relation1(family, 5)
    assert report.passed
    assert report.value == value
    assert report.lines()[0] == f"family=kdegenerate(k=1) n=5 tau={value.moves}"


def test_canonical_search_agrees():
    family = GameFamily.k_degenerate(1)
    plain = Solver(family, 5)
    merged = Solver(family, 5, canonical=True)
    assert plain.value() == merged.value()
    assert len(merged.memo) < len(plain.memo)


def test_root_parallel_search_agrees():
    family = GameFamily.k_degenerate(1)
    assert solve_tau(family, 5, workers=2) == solve_tau(family, 5)


def test_principal_variation_replays_to_the_value():
    family = GameFamily.k_degenerate(1)
    line = principal_variation(family, 5)
    value = solve_tau(family, 5)
    avoider = ScriptedStrategy(line[0::2])
    enforcer = ScriptedStrategy(line[1::2])
    _, result = play_game(5, family, avoider, enforcer, 0)
    assert result.loss_move == value.moves
    assert avoider.diagnostics == []


def test_position_values():
    family = GameFamily.k_degenerate(1)
    solver = Solver(family, 4)
    triangle = sum(1 << edge_index(4, e) for e in (Edge(0, 1), Edge(0, 2), Edge(1, 2)))
    blocked = sum(1 << edge_index(4, e) for e in (Edge(0, 3), Edge(1, 3)))
    assert solver.value_of(Position(triangle, blocked)) == GameValue(3)
    assert solver.value_of(Position()).is_infinite
    assert Position(1, 0).avoider_to_move is False


def test_position_validation():
    with pytest.raises(InvalidParameterError):
        Position(1, 1)
    with pytest.raises(InvalidParameterError):
        Position(0, 1)


def test_capacity_limits():
    with pytest.raises(CapacityError):
        Solver(GameFamily.outerplanar(), 7)
    with pytest.raises(CapacityError):
        Solver(GameFamily.k_degenerate(1), 5, memo_limit=10).value()


@pytest.mark.parametrize(
    "family, n, expected",
    [
        (GameFamily.diamond_free(), 5, GameValue(None)),
        (GameFamily.k_degenerate(1), 5, GameValue(5)),
    ],
)
def test_pinned_five_vertex_values(family, n, expected):
    assert solve_tau(family, n) == expected
    assert verify_relation1(family, n).passed


def _mask(n, edges):
    return sum(1 << edge_index(n, Edge.of(u, v)) for u, v in edges)


@pytest.mark.parametrize("family", [GameFamily.diamond_free(), GameFamily.k_degenerate(1)])
def test_values_do_not_depend_on_vertex_labels(family):
    n = 5
    relabel = [3, 0, 4, 1, 2]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    solver = Solver(family, n)
    for a, e in itertools.permutations(edges, 2):
        original = Position(_mask(n, [a]), _mask(n, [e]))
        moved = Position(
            _mask(n, [(relabel[a[0]], relabel[a[1]])]),
            _mask(n, [(relabel[e[0]], relabel[e[1]])]),
        )
        assert solver.value_of(original) == solver.value_of(moved)


def _play_out(n, family, avoider, enforcer, lost_at):
    """Plays every line to a full board; the loss is the first losing Avoider move."""

    free = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if (u, v) not in avoider and (u, v) not in enforcer
    ]
    if not free:
        return math.inf if lost_at is None else lost_at
    if len(avoider) == len(enforcer):
        best = -math.inf
        for e in free:
            grown = avoider | {e}
            loss = lost_at
            if loss is None and is_losing(SimpleGraph(n, grown), family):
                loss = len(grown)
            best = max(best, _play_out(n, family, grown, enforcer, loss))
        return best
    return min(_play_out(n, family, avoider, enforcer | {e}, lost_at) for e in free)


@pytest.mark.parametrize(
    "family",
    [
        GameFamily.outerplanar(),
        GameFamily.diamond_free(),
        GameFamily.k_degenerate(1),
        GameFamily.k_degenerate(2),
    ],
)
def test_early_stop_search_matches_full_board_play(family):
    n = 4
    solver = Solver(family, n)
    reference = _play_out(n, family, frozenset(), frozenset(), None)
    value = solver.value_of(Position())
    assert (math.inf if value.is_infinite else value.moves) == reference

    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for a, e in itertools.permutations(edges, 2):
        expected = _play_out(n, family, frozenset({a}), frozenset({e}), None)
        value = solver.value_of(Position(_mask(n, [a]), _mask(n, [e])))
        assert (math.inf if value.is_infinite else value.moves) == expected
