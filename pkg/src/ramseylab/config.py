"""Search limits shared by the library and the command line."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_MAX_N = "RAMSEYLAB_MAX_N"


class LimitExceeded(RuntimeError):
    """Raised when an exact search would run past a configured limit."""


@dataclass(frozen=True)
class Limits:
    max_clique_vertices: int = 64
    chromatic_vertices: int = 20
    search_n: int = 12
    random_attempts: int = 10_000


def default_limits() -> Limits:
    """Defaults, with ``RAMSEYLAB_MAX_N`` overriding the arrowing search limit."""
    raw = os.environ.get(ENV_MAX_N)
    if raw is None:
        return Limits()
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_MAX_N} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"{ENV_MAX_N} must be a positive integer, got {raw!r}")
    return Limits(search_n=value)
