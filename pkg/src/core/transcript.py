"""Replayable game transcripts and their JSON document format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .board import Edge, Player
from .properties import FamilyKind, GameFamily, InvalidParameterError

TRANSCRIPT_VERSION = 1
MAX_SEED = 2**64 - 1


class TranscriptFormatError(ValueError):
    """Raised when a transcript document is malformed."""


@dataclass(frozen=True)
class GameResult:
    """``loss_move`` counts Avoider's moves; ``None`` means Avoider survived."""

    loss_move: Optional[int] = None

    @classmethod
    def lost(cls, t: int) -> "GameResult":
        if t < 1:
            raise InvalidParameterError(f"Loss move must be positive, got {t}")
        return cls(t)

    @property
    def survived(self) -> bool:
        return self.loss_move is None

    def to_document(self) -> Dict[str, Any]:
        return {"survived": True} if self.survived else {"lost_at": self.loss_move}

    def __str__(self) -> str:
        return "survived" if self.survived else str(self.loss_move)


SURVIVED = GameResult()


@dataclass(frozen=True)
class Diagnostic:
    """A scripted-strategy precondition that did not hold at ``move``."""

    move: int
    code: str
    message: str

    def to_document(self) -> Dict[str, Any]:
        return {"move": self.move, "code": self.code, "message": self.message}


@dataclass(frozen=True)
class Transcript:
    family: GameFamily
    n: int
    seed: int
    avoider: str
    enforcer: str
    moves: Tuple[Tuple[Player, Edge], ...]
    result: GameResult
    diagnostics: Tuple[Diagnostic, ...] = field(default_factory=tuple)
    version: int = TRANSCRIPT_VERSION

    def to_document(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "version": self.version,
            "family": self.family.descriptor,
        }
        if self.family.kind is FamilyKind.K_DEGENERATE:
            document["k"] = self.family.k
        document.update(
            {
                "n": self.n,
                "seed": self.seed,
                "avoider": self.avoider,
                "enforcer": self.enforcer,
                "moves": [{"p": p.value, "e": [e.u, e.v]} for p, e in self.moves],
                "result": self.result.to_document(),
            }
        )
        if self.diagnostics:
            document["diagnostics"] = [d.to_document() for d in self.diagnostics]
        return document

    def to_json(self) -> str:
        return json.dumps(self.to_document(), separators=(",", ":"), sort_keys=False)

    def dump(self, path: Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def from_document(cls, document: Mapping[str, Any]) -> "Transcript":
        try:
            version = int(document["version"])
            if version != TRANSCRIPT_VERSION:
                raise TranscriptFormatError(f"Unsupported transcript version {version}")
            kind = str(document["family"])
            k = document.get("k")
            family = GameFamily.from_descriptor(kind, int(k) if k is not None else None)
            n = int(document["n"])
            seed = int(document["seed"])
            if not 0 <= seed <= MAX_SEED:
                raise TranscriptFormatError(
                    f"Seed {seed} is not an unsigned 64-bit integer"
                )
            moves: List[Tuple[Player, Edge]] = []
            for entry in document["moves"]:
                player = Player(entry["p"])
                u, v = entry["e"]
                moves.append((player, Edge(int(u), int(v))))
            raw_result = document["result"]
            if raw_result.get("survived") is True:
                result = SURVIVED
            else:
                result = GameResult.lost(int(raw_result["lost_at"]))
            diagnostics = tuple(
                Diagnostic(int(d["move"]), str(d["code"]), str(d.get("message", "")))
                for d in document.get("diagnostics", [])
            )
            return cls(
                family=family,
                n=n,
                seed=seed,
                avoider=str(document["avoider"]),
                enforcer=str(document["enforcer"]),
                moves=tuple(moves),
                result=result,
                diagnostics=diagnostics,
                version=version,
            )
        except TranscriptFormatError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise TranscriptFormatError(f"Malformed transcript: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise TranscriptFormatError(f"Transcript is not valid JSON: {exc}") from exc
        if not isinstance(document, dict):
            raise TranscriptFormatError("Transcript must be a JSON object")
        return cls.from_document(document)

    @classmethod
    def load(cls, path: Path) -> "Transcript":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


__all__ = [
    "Diagnostic",
    "GameResult",
    "MAX_SEED",
    "SURVIVED",
    "TRANSCRIPT_VERSION",
    "Transcript",
    "TranscriptFormatError",
]
