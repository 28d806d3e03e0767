"""Replay a transcript on a fresh board and re-verify everything it claims."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from .board import Board, Edge, OccupiedEdgeError, Player
from .engine import LossMonitor, StrategyFaultError, play_game
from .pairing_enforcer import PairingEnforcer
from .properties import (
    InvalidParameterError,
    SimpleGraph,
    is_losing,
    max_avoidable_edges,
)
from .registry import STRATEGIES, build_strategy
from .transcript import GameResult, Transcript

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckFailure:
    code: str
    move: int
    message: str

    def __str__(self) -> str:
        return f"{self.code} at move {self.move}: {self.message}"


@dataclass
class CheckReport:
    failures: List[CheckFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, code: str, move: int, message: str) -> None:
        logger.info("Check failed: %s at move %d: %s", code, move, message)
        self.failures.append(CheckFailure(code, move, message))


def _replay_moves(transcript: Transcript, report: CheckReport) -> Optional[Board]:
    """Re-apply all moves; returns the board, or ``None`` if replay had to stop."""

    board = Board(transcript.n)
    monitor = LossMonitor(transcript.n, transcript.family)
    lost_at: Optional[int] = None
    for ply, (player, e) in enumerate(transcript.moves, start=1):
        expected = Player.AVOIDER if ply % 2 == 1 else Player.ENFORCER
        if player is not expected:
            report.fail("alternation", ply, f"expected {expected.name}, got {player.name}")
            return None
        if lost_at is not None:
            report.fail("moves-after-loss", ply, f"play continued after Avoider lost at {lost_at}")
            return None
        try:
            board.claim(player, e)
        except OccupiedEdgeError as exc:
            report.fail("occupied", ply, str(exc))
            return None
        except InvalidParameterError as exc:
            report.fail("illegal-edge", ply, str(exc))
            return None
        if player is Player.AVOIDER and monitor.add(Edge(*e)):
            lost_at = board.moves_made[Player.AVOIDER]

    replayed = GameResult.lost(lost_at) if lost_at is not None else GameResult()
    if lost_at is None and not board.is_full:
        report.fail("incomplete", len(transcript.moves), "game stopped before a loss or a full board")
    if replayed != transcript.result:
        report.fail(
            "loss-index",
            len(transcript.moves),
            f"transcript says {transcript.result}, replay gives {replayed}",
        )
    if lost_at is not None:
        _confirm_loss(transcript, lost_at, report)
        ceiling = max_avoidable_edges(transcript.family, transcript.n) + 1
        if lost_at > ceiling:
            report.fail("upper-bound", lost_at, f"loss at {lost_at} exceeds {ceiling}")
    return board


def _confirm_loss(transcript: Transcript, lost_at: int, report: CheckReport) -> None:
    """Cross-check the incremental monitor with full property checks."""

    avoider_edges = [e for p, e in transcript.moves if p is Player.AVOIDER]
    before = SimpleGraph(transcript.n)
    for e in avoider_edges[: lost_at - 1]:
        before.add_edge(*e)
    if is_losing(before, transcript.family):
        report.fail("loss-index", lost_at - 1, "Avoider's graph was already losing")
    u, v = avoider_edges[lost_at - 1]
    before.add_edge(u, v)
    if not is_losing(before, transcript.family):
        report.fail("loss-index", lost_at, "Avoider's graph is not losing at the recorded move")


def _check_pairing_block(transcript: Transcript, report: CheckReport) -> None:
    enforcer_moves = [e for p, e in transcript.moves if p is Player.ENFORCER]
    if not enforcer_moves:
        return
    anchor = enforcer_moves[0]
    owned = set()
    for ply, (player, e) in enumerate(transcript.moves, start=1):
        if player is not Player.AVOIDER:
            continue
        owned.add(tuple(e))
        for w, other in ((anchor.u, anchor.v), (anchor.v, anchor.u)):
            if e.touches(w) and not e.touches(other):
                x = e.other(w)
                if tuple(Edge.of(x, other)) in owned:
                    report.fail(
                        "pairing-block",
                        ply,
                        f"Avoider owns both {x}-{anchor.u} and {x}-{anchor.v}",
                    )


def _resimulate(transcript: Transcript, report: CheckReport) -> None:
    if transcript.avoider not in STRATEGIES or transcript.enforcer not in STRATEGIES:
        return
    avoider = build_strategy(transcript.avoider, Player.AVOIDER)
    enforcer = build_strategy(transcript.enforcer, Player.ENFORCER)
    try:
        rerun, _ = play_game(
            transcript.n, transcript.family, avoider, enforcer, transcript.seed
        )
    except StrategyFaultError as exc:
        report.fail("replay-divergence", exc.move_index, str(exc))
        return
    for ply, (recorded, replayed) in enumerate(zip(transcript.moves, rerun.moves), start=1):
        if recorded != replayed:
            report.fail("replay-divergence", ply, f"recorded {recorded[1]}, strategies play {replayed[1]}")
            break
    else:
        if len(transcript.moves) != len(rerun.moves):
            ply = min(len(transcript.moves), len(rerun.moves)) + 1
            report.fail("replay-divergence", ply, "transcript and rerun differ in length")
    for strategy in (avoider, enforcer):
        for violation in strategy.violations:
            report.fail(violation.code, violation.move, violation.message)


def check_transcript(transcript: Transcript) -> CheckReport:
    report = CheckReport()
    board = _replay_moves(transcript, report)
    if board is None:
        return report
    if transcript.enforcer == PairingEnforcer.identifier and transcript.n >= PairingEnforcer.minimum_n:
        _check_pairing_block(transcript, report)
    _resimulate(transcript, report)
    return report


__all__ = ["CheckFailure", "CheckReport", "check_transcript"]
