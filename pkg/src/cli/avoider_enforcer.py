"""Command-line harness for Avoider-Enforcer games on E(K_n).

Subcommands: ``play`` runs one game, ``sweep`` runs a grid of games to CSV or
JSON, ``solve`` computes exact values on small boards and ``check`` replays a
transcript (or evaluates a graph file).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from core import settings
from core.board import Player
from core.engine import StrategyFaultError, play_game
from core.properties import (
    CapacityError,
    FamilyKind,
    GameFamily,
    InvalidParameterError,
    degeneracy,
    extremal,
    is_losing,
    parse_edge_list,
    tau_bounds,
    theorem_lower_bound,
)
from core.registry import build_strategy, identifiers_for
from core.replay import check_transcript
from core.solver import principal_variation, verify_relation1
from core.transcript import MAX_SEED, Transcript, TranscriptFormatError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

SWEEP_FIELDS = (
    "n",
    "family",
    "k",
    "avoider",
    "enforcer",
    "seed",
    "loss_move",
    "bound_lower",
    "bound_upper",
    "theorem_lower",
    "within_bounds",
    "diagnostics",
)
OUTPUT_FORMATS = ("csv", "json")
PAIRING_ENFORCER = "pairing-enforcer"


@dataclass(frozen=True)
class RunConfig:
    family: GameFamily
    ns: Tuple[int, ...]
    avoider: str
    enforcer: str
    trials: int = 1
    seed: int = 0
    transcript: Optional[Path] = None
    out: Optional[Path] = None
    output_format: str = "csv"
    workers: int = 1

    def __post_init__(self) -> None:
        if not self.ns:
            raise InvalidParameterError("The range of n is empty")
        floor = self.family.k + 1 if self.family.kind is FamilyKind.K_DEGENERATE else 2
        for n in self.ns:
            if n < floor:
                raise InvalidParameterError(f"n must be at least {floor} for {self.family}, got {n}")
        if self.trials < 1:
            raise InvalidParameterError(f"--trials must be at least 1, got {self.trials}")
        if self.seed < 0 or self.seed + self.trials - 1 > MAX_SEED:
            raise InvalidParameterError(f"Seeds must fit in an unsigned 64-bit integer, got {self.seed}")
        if self.avoider not in identifiers_for(Player.AVOIDER):
            raise InvalidParameterError(f"Unknown Avoider strategy {self.avoider!r}")
        if self.enforcer not in identifiers_for(Player.ENFORCER):
            raise InvalidParameterError(f"Unknown Enforcer strategy {self.enforcer!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameterError(f"Unknown output format {self.output_format!r}")
        if self.workers < 1:
            raise InvalidParameterError(f"--workers must be at least 1, got {self.workers}")


@dataclass(frozen=True)
class SweepRow:
    n: int
    family: str
    k: Optional[int]
    avoider: str
    enforcer: str
    seed: int
    loss_move: Optional[int]
    bound_lower: int
    bound_upper: int
    theorem_lower: int
    within_bounds: bool
    diagnostics: int

    @classmethod
    def build(
        cls,
        family: GameFamily,
        n: int,
        avoider: str,
        enforcer: str,
        seed: int,
        loss_move: Optional[int],
        diagnostics: int,
    ) -> "SweepRow":
        lower, upper = tau_bounds(family, n)
        # A survived game exceeds no upper bound.
        within = loss_move is None or loss_move <= upper
        return cls(
            n=n,
            family=family.descriptor,
            k=family.k,
            avoider=avoider,
            enforcer=enforcer,
            seed=seed,
            loss_move=loss_move,
            bound_lower=lower,
            bound_upper=upper,
            theorem_lower=theorem_lower_bound(family, n),
            within_bounds=within,
            diagnostics=diagnostics,
        )

    def as_csv(self) -> Dict[str, str]:
        values = asdict(self)
        row = {name: "" if values[name] is None else str(values[name]) for name in SWEEP_FIELDS}
        row["within_bounds"] = "true" if self.within_bounds else "false"
        return row


# ---------------------------------------------------------------------------
# Argument handling


def _family_from_args(args: argparse.Namespace) -> GameFamily:
    if args.family == FamilyKind.K_DEGENERATE.value and args.k is None:
        raise InvalidParameterError("--family kdegenerate needs --k")
    return GameFamily.from_descriptor(args.family, args.k)


def _ns_from_args(args: argparse.Namespace) -> Tuple[int, ...]:
    if args.n is not None:
        return (args.n,)
    if args.n_min is None or args.n_max is None:
        raise InvalidParameterError("Give either --n or both --n-min and --n-max")
    if args.n_step < 1:
        raise InvalidParameterError(f"--n-step must be positive, got {args.n_step}")
    return tuple(range(args.n_min, args.n_max + 1, args.n_step))


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        family=_family_from_args(args),
        ns=_ns_from_args(args),
        avoider=args.avoider,
        enforcer=args.enforcer,
        trials=args.trials,
        seed=args.seed,
        transcript=Path(args.transcript) if args.transcript else None,
        out=Path(args.out) if args.out else None,
        output_format=args.output_format,
        workers=args.workers if args.workers is not None else settings.sweep_workers(),
    )


def _add_family_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument(
        "--family",
        required=required,
        choices=[kind.value for kind in FamilyKind],
        help="Family the Avoider graph must stay in",
    )
    parser.add_argument("--k", type=int, default=None, help="Degeneracy for --family kdegenerate")


def _add_game_flags(parser: argparse.ArgumentParser) -> None:
    _add_family_flags(parser)
    parser.add_argument("--n", type=int, default=None, help="Number of vertices")
    parser.add_argument("--avoider", required=True, help="Avoider strategy identifier")
    parser.add_argument("--enforcer", required=True, help="Enforcer strategy identifier")
    parser.add_argument("--seed", type=int, default=0, help="Base seed (unsigned 64-bit)")
    parser.add_argument("--transcript", default=None, help="Transcript path (directory for sweep)")
    parser.add_argument("--out", default=None, help="Output path; stdout when omitted")
    parser.add_argument(
        "--format",
        dest="output_format",
        default="csv",
        choices=OUTPUT_FORMATS,
    )
    parser.add_argument("--workers", type=int, default=None, help="Worker processes")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Avoider-Enforcer game harness")
    parser.add_argument(
        "--log-level",
        default=None,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default from AVOIDER_LOG_LEVEL or WARNING)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    play = commands.add_parser("play", help="Run one game")
    _add_game_flags(play)
    play.set_defaults(trials=1, n_min=None, n_max=None, n_step=1)

    sweep = commands.add_parser("sweep", help="Run a grid of games")
    _add_game_flags(sweep)
    sweep.add_argument("--n-min", type=int, default=None)
    sweep.add_argument("--n-max", type=int, default=None)
    sweep.add_argument("--n-step", type=int, default=1)
    sweep.add_argument("--trials", type=int, default=1)

    solve = commands.add_parser("solve", help="Exact optimal-play value on a small board")
    _add_family_flags(solve)
    solve.add_argument("--n", type=int, required=True)
    solve.add_argument("--memo-limit", type=int, default=None)
    solve.add_argument("--canonical", action="store_true", help="Merge isomorphic positions")
    solve.add_argument("--workers", type=int, default=1)
    solve.add_argument("--line", action="store_true", help="Print an optimal line of play")
    solve.add_argument("--out", default=None, help="CSV/JSON row output path")
    solve.add_argument("--format", dest="output_format", default="csv", choices=OUTPUT_FORMATS)

    check = commands.add_parser("check", help="Validate a transcript or evaluate a graph")
    source = check.add_mutually_exclusive_group(required=True)
    source.add_argument("--transcript", default=None)
    source.add_argument("--graph", default=None, help="Edge-list file ('n m' then 'u v' lines)")
    _add_family_flags(check, required=False)
    return parser


# ---------------------------------------------------------------------------
# Output


def _write_rows(rows: Sequence[SweepRow], output_format: str, stream: TextIO) -> None:
    if output_format == "json":
        stream.write(json.dumps([asdict(row) for row in rows], indent=2) + "\n")
        return
    writer = csv.DictWriter(stream, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_csv())


def _emit_rows(rows: Sequence[SweepRow], output_format: str, out: Optional[Path]) -> TextIO:
    """Write rows and return the stream that summaries should go to."""

    if out is None:
        _write_rows(rows, output_format, sys.stdout)
        return sys.stderr
    buffer = io.StringIO()
    _write_rows(rows, output_format, buffer)
    out.write_text(buffer.getvalue(), encoding="utf-8")
    return sys.stdout


def summarize(rows: Iterable[SweepRow]) -> List[str]:
    """Per-``n`` loss statistics, computed from emitted rows only.

    Each line gives min/median/max of the loss move. Outerplanar games against
    the pairing Enforcer add whether the maximum stays within ``2n - 3``. The
    last line names the smallest ``n`` from which every game reaches its
    ``theorem_lower`` guarantee.
    """

    by_n: Dict[int, List[SweepRow]] = {}
    for row in rows:
        by_n.setdefault(row.n, []).append(row)
    lines = []
    for n, group in by_n.items():
        values = [row.loss_move for row in group if row.loss_move is not None]
        survived = len(group) - len(values)
        if values:
            moves = np.array(values)
            top = int(moves.max())
            text = f"n={n} min={int(moves.min())} median={float(np.median(moves)):g} max={top}"
            if all(
                row.family == FamilyKind.OUTERPLANAR.value and row.enforcer == PAIRING_ENFORCER
                for row in group
            ):
                text += f" max<=2n-3={'yes' if top <= 2 * n - 3 else 'no'}"
        else:
            text = f"n={n} min=survived median=survived max=survived"
        if survived:
            text += f" survived={survived}"
        lines.append(text)

    held = {
        n: all(row.loss_move is None or row.loss_move >= row.theorem_lower for row in group)
        for n, group in by_n.items()
    }
    start: Optional[int] = None
    for n in sorted(held, reverse=True):
        if not held[n]:
            break
        start = n
    if by_n:
        lines.append(f"guarantee_from={start if start is not None else 'none'}")
    return lines


# ---------------------------------------------------------------------------
# Games


@dataclass(frozen=True)
class _Trial:
    family: GameFamily
    n: int
    avoider: str
    enforcer: str
    seed: int
    keep_transcript: bool


def _run_trial(trial: _Trial) -> Tuple[SweepRow, Optional[str], Optional[str]]:
    """Returns the row, the transcript JSON (if kept) and a fault message."""

    avoider = build_strategy(trial.avoider, Player.AVOIDER)
    enforcer = build_strategy(trial.enforcer, Player.ENFORCER)
    try:
        transcript, result = play_game(trial.n, trial.family, avoider, enforcer, trial.seed)
    except StrategyFaultError as exc:
        count = sum(
            len(s.diagnostics) + len(s.violations) for s in (avoider, enforcer)
        )
        row = SweepRow.build(
            trial.family, trial.n, trial.avoider, trial.enforcer, trial.seed, None, count + 1
        )
        return row, None, str(exc)
    row = SweepRow.build(
        trial.family,
        trial.n,
        trial.avoider,
        trial.enforcer,
        trial.seed,
        result.loss_move,
        len(transcript.diagnostics),
    )
    return row, transcript.to_json() if trial.keep_transcript else None, None


def _transcript_name(trial: _Trial) -> str:
    return f"{trial.family.descriptor}-n{trial.n}-seed{trial.seed}.json"


def cmd_play(config: RunConfig) -> int:
    n = config.ns[0]
    avoider = build_strategy(config.avoider, Player.AVOIDER)
    enforcer = build_strategy(config.enforcer, Player.ENFORCER)
    try:
        transcript, result = play_game(n, config.family, avoider, enforcer, config.seed)
    except StrategyFaultError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAILURE
    if config.transcript is not None:
        transcript.dump(config.transcript)
    if transcript.diagnostics:
        sys.stderr.write(f"{len(transcript.diagnostics)} diagnostics recorded\n")
    sys.stdout.write(f"{config.family} {n} {config.seed} {result}\n")
    return EXIT_OK


def cmd_sweep(config: RunConfig) -> int:
    trials = [
        _Trial(
            config.family,
            n,
            config.avoider,
            config.enforcer,
            config.seed + index,
            config.transcript is not None,
        )
        for n in config.ns
        for index in range(config.trials)
    ]
    logger.info("Sweeping %d games with %d workers", len(trials), config.workers)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(_run_trial, trials, chunksize=4))
    else:
        outcomes = [_run_trial(trial) for trial in trials]

    if config.transcript is not None:
        config.transcript.mkdir(parents=True, exist_ok=True)
    faults: List[str] = []
    for trial, (_, text, fault) in zip(trials, outcomes):
        if fault is not None:
            faults.append(fault)
        elif text is not None:
            (config.transcript / _transcript_name(trial)).write_text(text + "\n", encoding="utf-8")

    rows = [row for row, _, _ in outcomes]
    summary_stream = _emit_rows(rows, config.output_format, config.out)
    summary_stream.write("\n".join(summarize(rows)) + "\n")
    if faults:
        sys.stderr.write("\n".join(faults) + "\n")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    family = _family_from_args(args)
    report = verify_relation1(
        family,
        args.n,
        memo_limit=args.memo_limit,
        canonical=args.canonical,
        workers=args.workers,
    )
    for line in report.lines():
        sys.stdout.write(line + "\n")
    if args.line:
        moves = principal_variation(family, args.n, memo_limit=args.memo_limit)
        sys.stdout.write("line=" + " ".join(f"{u}-{v}" for u, v in moves) + "\n")
    if args.out:
        row = SweepRow.build(family, args.n, "optimal", "optimal", 0, report.value.moves, 0)
        _emit_rows([row], args.output_format, Path(args.out))
    return EXIT_OK if report.passed else EXIT_FAILURE


def cmd_check(args: argparse.Namespace) -> int:
    if args.graph is not None:
        if args.family is None:
            raise InvalidParameterError("check --graph needs --family")
        family = _family_from_args(args)
        graph = parse_edge_list(Path(args.graph).read_text(encoding="utf-8"))
        losing = is_losing(graph, family)
        certificate = degeneracy(graph)
        sys.stdout.write(
            f"family={family} n={graph.n} edges={graph.edge_count} "
            f"losing={'yes' if losing else 'no'} degeneracy={certificate.k}"
        )
        if graph.n > (family.k or 1):
            sys.stdout.write(f" extremal={extremal(family, graph.n)}")
        sys.stdout.write("\n")
        return EXIT_OK

    transcript = Transcript.load(Path(args.transcript))
    report = check_transcript(transcript)
    if report.ok:
        sys.stdout.write(f"ok {transcript.family} {transcript.n} {transcript.seed} {transcript.result}\n")
        return EXIT_OK
    for failure in report.failures:
        sys.stdout.write(f"FAIL {failure}\n")
    return EXIT_FAILURE


def _configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger().setLevel(level or settings.log_level())


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.log_level)

    try:
        if args.command == "play":
            return cmd_play(_config_from_args(args))
        if args.command == "sweep":
            return cmd_sweep(_config_from_args(args))
        if args.command == "solve":
            return cmd_solve(args)
        return cmd_check(args)
    except (InvalidParameterError, TranscriptFormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except CapacityError as exc:
        sys.stderr.write(f"capacity: {exc}\n")
        return EXIT_FAILURE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(run_cli())
