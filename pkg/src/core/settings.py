"""Runtime settings read from optional environment overrides.

Nothing here is required; every value has a default and CLI flags take
precedence. The variables are:

* ``AVOIDER_SOLVER_MEMO_LIMIT`` – maximum number of memoised positions the
  exact solver may store before giving up with a capacity error.
* ``AVOIDER_LOG_LEVEL`` – default logging level for the command-line tool.
* ``AVOIDER_SWEEP_WORKERS`` – default number of worker processes for sweeps.
"""

from __future__ import annotations

import logging
import os

DEFAULT_MEMO_LIMIT = 4_000_000
DEFAULT_LOG_LEVEL = "WARNING"


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        logging.getLogger(__name__).warning("Ignoring non-integer %s=%r", name, raw)
        return default
    return value if value > 0 else default


def solver_memo_limit() -> int:
    return _int_from_env("AVOIDER_SOLVER_MEMO_LIMIT", DEFAULT_MEMO_LIMIT)


def sweep_workers() -> int:
    return _int_from_env("AVOIDER_SWEEP_WORKERS", 1)


def log_level() -> str:
    level = os.getenv("AVOIDER_LOG_LEVEL", DEFAULT_LOG_LEVEL).upper()
    if level not in logging.getLevelNamesMapping():
        return DEFAULT_LOG_LEVEL
    return level


__all__ = [
    "DEFAULT_LOG_LEVEL",
    "DEFAULT_MEMO_LIMIT",
    "log_level",
    "solver_memo_limit",
    "sweep_workers",
]
