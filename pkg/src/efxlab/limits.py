"""Brute-force size caps.

Every exhaustive routine checks its input against one of these caps and
raises :class:`~efxlab.errors.LimitExceededError` instead of sampling.

The ``EFXLAB_LIMIT`` environment variable overrides the defaults. It is
either a bare integer (the allocation enumeration cap) or a comma-separated
list of ``field=value`` pairs, e.g. ``allocations=1000,wwl_m=12``.
"""

from __future__ import annotations

import dataclasses
import os

from .errors import LimitExceededError, ParseError


@dataclasses.dataclass(frozen=True)
class Limits:
    brute_force_m: int = 16
    wwl_m: int = 10
    trajectory_m: int = 12
    table_m: int = 24
    allocations: int = 2 * 10**7


def parse_limit_spec(spec: str, base: Limits | None = None) -> Limits:
    base = base or Limits()
    spec = spec.strip()
    if not spec:
        return base
    try:
        if "=" not in spec:
            return dataclasses.replace(base, allocations=int(spec))
        updates = {}
        names = {f.name for f in dataclasses.fields(Limits)}
        for item in spec.split(","):
            key, _, raw = item.partition("=")
            key = key.strip()
            if key not in names:
                raise ParseError(f"unknown limit {key!r}")
            updates[key] = int(raw)
        return dataclasses.replace(base, **updates)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad limit spec {spec!r}") from exc


_current = parse_limit_spec(os.environ.get("EFXLAB_LIMIT", ""))


def get_limits() -> Limits:
    return _current


def set_limits(limits: Limits) -> None:
    global _current
    _current = limits


def require(what: str, size: int, cap: int) -> None:
    if size > cap:
        raise LimitExceededError(f"{what}: {size} exceeds limit {cap}")
