"""Allocations, EFX / envy-freeness verification and the leximin++ local search.

Agents and goods are 0-indexed throughout.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Iterator, Sequence

from . import limits
from .bundles import Bundle, Value, full, members, size
from .errors import ParseError
from .valuations import Valuation


@dataclasses.dataclass(frozen=True)
class Allocation:
    bundles: tuple[Bundle, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(self.bundles))
        seen = 0
        for B in self.bundles:
            if B < 0 or B >> self.m:
                raise ValueError(f"bundle {B:#x} has goods outside [0, {self.m})")
            if seen & B:
                raise ValueError("bundles overlap")
            seen |= B

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def is_complete(self) -> bool:
        union = 0
        for B in self.bundles:
            union |= B
        return union == full(self.m)

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]], m: int) -> "Allocation":
        return cls(tuple(sum(1 << g for g in goods) for goods in lists), m)

    @classmethod
    def from_owners(cls, owners: Sequence[int], n: int) -> "Allocation":
        """``owners[g]`` is the agent holding good ``g``."""
        bundles = [0] * n
        for g, i in enumerate(owners):
            bundles[i] |= 1 << g
        return cls(tuple(bundles), len(owners))

    def lists(self) -> list[list[int]]:
        return [members(B) for B in self.bundles]

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "bundles": self.lists()}

    @classmethod
    def from_json(cls, obj: dict) -> "Allocation":
        try:
            alloc = cls.from_lists(obj["bundles"], int(obj["m"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad allocation JSON: {exc}") from exc
        if "n" in obj and int(obj["n"]) != alloc.n:
            raise ParseError("allocation 'n' does not match number of bundles")
        return alloc


@dataclasses.dataclass(frozen=True)
class EfxVerdict:
    """``ok`` or a violation: agent ``i`` envies agent ``j`` even after
    removing good ``g`` from ``j``'s bundle (``g`` is None for plain envy)."""

    ok: bool
    i: int | None = None
    j: int | None = None
    g: int | None = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        if self.ok:
            return {"verdict": "ok"}
        return {"verdict": "violation", "i": self.i, "j": self.j, "g": self.g}


OK = EfxVerdict(True)


@dataclasses.dataclass(frozen=True)
class MonotonicityViolation:
    S: Bundle
    T: Bundle

    def reproduces(self, v: Valuation) -> bool:
        return self.S & ~self.T == 0 and v(self.S) > v(self.T)

    def to_json(self) -> dict:
        return {"S": members(self.S), "T": members(self.T)}


def _as_list(valuations, n: int) -> list[Valuation]:
    if isinstance(valuations, Valuation):
        return [valuations] * n
    vals = list(valuations)
    if len(vals) != n:
        raise ValueError(f"got {len(vals)} valuations for {n} agents")
    return vals


def _check_instance(vals: Sequence[Valuation], X: Allocation, require_complete: bool) -> None:
    for v in vals:
        if v.m != X.m:
            raise ValueError(f"valuation on {v.m} goods, allocation on {X.m}")
    if require_complete and not X.is_complete:
        raise ValueError("allocation is incomplete")


def is_efx(valuations, X: Allocation, require_complete: bool = True) -> EfxVerdict:
    """EFX check; ``valuations`` is one per agent, or a single shared one.

    Returns the lexicographically smallest violating ``(i, j, g)``.
    """
    vals = _as_list(valuations, X.n)
    _check_instance(vals, X, require_complete)
    for i, v in enumerate(vals):
        own = v(X.bundles[i])
        for j, Xj in enumerate(X.bundles):
            if j == i:
                continue
            for g in members(Xj):
                if own < v(Xj & ~(1 << g)):
                    return EfxVerdict(False, i, j, g)
    return OK


def is_envy_free(valuations, X: Allocation, require_complete: bool = True) -> EfxVerdict:
    vals = _as_list(valuations, X.n)
    _check_instance(vals, X, require_complete)
    for i, v in enumerate(vals):
        own = v(X.bundles[i])
        for j, Xj in enumerate(X.bundles):
            if j != i and own < v(Xj):
                return EfxVerdict(False, i, j, None)
    return OK


LeximinKey = tuple  # tuple of (utility, cardinality) pairs, worst-off first


def agent_order(v: Valuation, X: Allocation) -> list[int]:
    """Agents by increasing utility, ties by agent index."""
    utils = [v(B) for B in X.bundles]
    return sorted(range(X.n), key=lambda i: (utils[i], i))


def leximin_key(v: Valuation, X: Allocation) -> LeximinKey:
    """Leximin++ key: compare lexicographically, larger is better."""
    return tuple((v(X.bundles[i]), size(X.bundles[i])) for i in agent_order(v, X))


def move(X: Allocation, g: int, src: int, dst: int) -> Allocation:
    bundles = list(X.bundles)
    bundles[src] &= ~(1 << g)
    bundles[dst] |= 1 << g
    return Allocation(tuple(bundles), X.m)


def single_move_neighbors(X: Allocation) -> Iterator[Allocation]:
    for j, Xj in enumerate(X.bundles):
        for g in members(Xj):
            for i in range(X.n):
                if i != j:
                    yield move(X, g, j, i)


def find_monotonicity_violation(v: Valuation, X: Allocation) -> MonotonicityViolation | None:
    """First pair ``S ⊆ T`` with ``v(S) > v(T)`` that differs from some
    bundle of ``X`` by one good."""
    for B in X.bundles:
        here = v(B)
        for g in range(X.m):
            G = 1 << g
            if B & G:
                smaller = B & ~G
                if v(smaller) > here:
                    return MonotonicityViolation(smaller, B)
            else:
                if v(B | G) < here:
                    return MonotonicityViolation(B, B | G)
    return None


@dataclasses.dataclass(frozen=True)
class IdenticalEfxSolution:
    """Exactly one of ``allocation`` (an EFX allocation) or ``violation``."""

    allocation: Allocation | None = None
    violation: MonotonicityViolation | None = None
    steps: int = 0

    @property
    def is_efx(self) -> bool:
        return self.allocation is not None

    def to_json(self) -> dict:
        if self.allocation is not None:
            return {"kind": "allocation", "allocation": self.allocation.to_json(), "steps": self.steps}
        return {"kind": "monotonicity_violation", "violation": self.violation.to_json(), "steps": self.steps}


def _improving_move(v: Valuation, X: Allocation):
    """Target move from a non-EFX allocation: the worst-off agent (last among
    ties) takes a good ``g`` from a bundle it envies even without ``g``.

    Returns the new allocation, or None if every such envy involves the
    worst-off agent's own bundle (which only happens under a monotonicity
    violation).
    """
    i = None
    utils = [v(B) for B in X.bundles]
    low = min(utils)
    for k in range(X.n):
        if utils[k] == low:
            i = k
    for j, Xj in enumerate(X.bundles):
        if j == i:
            continue
        for g in members(Xj):
            if low < v(Xj & ~(1 << g)):
                return move(X, g, j, i)
    return None


def best_neighbor(v: Valuation, X: Allocation, key: LeximinKey | None = None):
    """Neighbour with the greatest leximin++ key if it beats ``X``, else None."""
    key = leximin_key(v, X) if key is None else key
    best, best_key = None, key
    for Y in single_move_neighbors(X):
        k = leximin_key(v, Y)
        if k > best_key:
            best, best_key = Y, k
    return best, best_key


def leximinpp_local_search(
    v: Valuation, n: int, polish: bool = True, max_steps: int | None = None
) -> IdenticalEfxSolution:
    """Local search for an EFX allocation among ``n`` agents sharing ``v``.

    Starts from agent 0 holding everything. While the allocation is not
    EFX, the worst-off agent (last among ties) takes a good from a bundle it
    envies even without that good; on a monotone ``v`` this strictly raises
    the leximin++ key. If it does not, a monotonicity violation next to the
    current allocation is returned instead.

    With ``polish`` the search continues from an EFX allocation through the
    best improving single-good move until it reaches a leximin++ local
    maximum; without it, the first EFX allocation reached is returned.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    X = Allocation((full(v.m),) + (0,) * (n - 1), v.m)
    key = leximin_key(v, X)
    steps = 0
    while True:
        if is_efx(v, X):
            if not polish:
                return IdenticalEfxSolution(allocation=X, steps=steps)
            Y, new_key = best_neighbor(v, X, key)
            if Y is None:
                return IdenticalEfxSolution(allocation=X, steps=steps)
        else:
            Y = _improving_move(v, X)
            new_key = leximin_key(v, Y) if Y is not None else None
            if Y is None or not new_key > key:
                viol = find_monotonicity_violation(v, X)
                if viol is None:
                    raise AssertionError("no improving move and no monotonicity violation")
                return IdenticalEfxSolution(violation=viol, steps=steps)
        X, key = Y, new_key
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise RuntimeError(f"local search exceeded {max_steps} steps")


def all_allocations(n: int, m: int) -> Iterator[Allocation]:
    limits.require("allocation enumeration n**m", n**m, limits.get_limits().allocations)
    for owners in itertools.product(range(n), repeat=m):
        yield Allocation.from_owners(owners, n)


def brute_force_efx(valuations, n: int, m: int | None = None) -> list[Allocation]:
    """Every complete EFX allocation, by enumeration of all ``n**m`` splits."""
    vals = _as_list(valuations, n)
    if m is None:
        m = vals[0].m
    return [X for X in all_allocations(n, m) if is_efx(vals, X)]


def brute_force_leximinpp_max(v: Valuation, n: int) -> Allocation:
    """Global leximin++ maximum; first in enumeration order among equal keys."""
    best, best_key = None, None
    for X in all_allocations(n, v.m):
        key = leximin_key(v, X)
        if best_key is None or key > best_key:
            best, best_key = X, key
    return best


def utilities(v: Valuation, X: Allocation) -> list[Value]:
    return [v(B) for B in X.bundles]


@dataclasses.dataclass(frozen=True)
class Instance:
    """Fair-division instance: one valuation per agent over ``m`` goods."""

    valuations: tuple
    identical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "valuations", tuple(self.valuations))
        if len({v.m for v in self.valuations}) > 1:
            raise ValueError("agents disagree on the number of goods")

    @classmethod
    def identical_agents(cls, v: Valuation, n: int) -> "Instance":
        return cls((v,) * n, identical=True)

    @property
    def n(self) -> int:
        return len(self.valuations)

    @property
    def m(self) -> int:
        return self.valuations[0].m if self.valuations else 0

    @property
    def common(self) -> Valuation:
        if not self.identical:
            raise ValueError("instance does not have identical agents")
        return self.valuations[0]

    def to_json(self) -> dict:
        if self.identical:
            return {"m": self.m, "n": self.n, "identical": True, "agents": [self.valuations[0].to_json()]}
        return {"m": self.m, "agents": [v.to_json() for v in self.valuations]}

    @classmethod
    def from_json(cls, obj: dict) -> "Instance":
        from .valuations import valuation_from_json

        try:
            agents = [valuation_from_json(a) for a in obj["agents"]]
            m = int(obj["m"])
            if obj.get("identical"):
                if len(agents) != 1:
                    raise ParseError("identical instance must list exactly one valuation")
                inst = cls.identical_agents(agents[0], int(obj.get("n", 2)))
            else:
                inst = cls(tuple(agents))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad instance JSON: {exc}") from exc
        if inst.valuations and inst.m != m:
            raise ParseError(f"instance declares m={m} but valuations have {inst.m} goods")
        return inst
