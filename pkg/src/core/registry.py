"""Stable strategy identifiers used by transcripts and the command line."""

from __future__ import annotations

from typing import Callable, Dict, List

from .board import Player
from .diamond_avoider import DiamondAvoider
from .kdegenerate_avoider import KDegenerateAvoider
from .outerplanar_avoider import OuterplanarAvoider
from .pairing_enforcer import PairingEnforcer
from .properties import InvalidParameterError
from .strategy import GreedyAvoider, RandomStrategy, SaboteurEnforcer, Strategy

STRATEGIES: Dict[str, Callable[[], Strategy]] = {
    OuterplanarAvoider.identifier: OuterplanarAvoider,
    DiamondAvoider.identifier: DiamondAvoider,
    KDegenerateAvoider.identifier: KDegenerateAvoider,
    PairingEnforcer.identifier: PairingEnforcer,
    RandomStrategy.identifier: RandomStrategy,
    GreedyAvoider.identifier: GreedyAvoider,
    SaboteurEnforcer.identifier: SaboteurEnforcer,
}


def build_strategy(identifier: str, role: Player) -> Strategy:
    try:
        strategy = STRATEGIES[identifier]()
    except KeyError as exc:
        raise InvalidParameterError(f"Unknown strategy {identifier!r}") from exc
    if role not in strategy.roles:
        raise InvalidParameterError(f"Strategy {identifier!r} cannot play {role.name.lower()}")
    return strategy


def identifiers_for(role: Player) -> List[str]:
    return [name for name, factory in STRATEGIES.items() if role in factory.roles]


__all__ = ["STRATEGIES", "build_strategy", "identifiers_for"]
