"""Size guard for exhaustive enumeration and exact search."""

import os

from .errors import LimitExceeded

DEFAULT_MAX_N = 12
ENV_VAR = "PROMISE_CC_MAX_N"


def exhaustive_limit() -> int:
    """Current word-length cap, overridable via the PROMISE_CC_MAX_N env var."""
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        value = int(raw)
    except ValueError as exc:
        raise LimitExceeded(f"{ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise LimitExceeded(f"{ENV_VAR} must be positive, got {value}")
    return value


def check_exhaustive(n: int, what: str) -> None:
    limit = exhaustive_limit()
    if n > limit:
        raise LimitExceeded(
            f"{what} at n={n} exceeds the exhaustive limit {limit}; "
            f"use sampling instead or raise {ENV_VAR}"
        )
