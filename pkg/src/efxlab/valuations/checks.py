"""Brute-force membership checks for the valuation classes.

All checks materialize the full value table, so they are exponential in
``m`` and guarded by the caps in :mod:`efxlab.limits`. A failing check
carries a witness whose ``reproduces(v)`` re-evaluates the violation.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from itertools import groupby
from typing import Sequence

from .. import limits
from ..bundles import Bundle, Value, full, members, size
from .base import Valuation


@dataclasses.dataclass(frozen=True)
class MonotoneWitness:
    S: Bundle
    T: Bundle

    def reproduces(self, v: Valuation) -> bool:
        return self.S & ~self.T == 0 and v(self.S) > v(self.T)


@dataclasses.dataclass(frozen=True)
class SubmodularWitness:
    """``T = S ∪ {y}`` and adding ``x`` to ``T`` gains more than adding it to ``S``."""

    S: Bundle
    T: Bundle
    x: int

    def reproduces(self, v: Valuation) -> bool:
        X = 1 << self.x
        return (
            self.S & ~self.T == 0
            and not self.T & X
            and v(self.S | X) - v(self.S) < v(self.T | X) - v(self.T)
        )


@dataclasses.dataclass(frozen=True)
class CancelableWitness:
    S: Bundle
    T: Bundle
    x: int

    def reproduces(self, v: Valuation) -> bool:
        X = 1 << self.x
        return (
            not (self.S | self.T) & X
            and v(self.S | X) > v(self.T | X)
            and not v(self.S) > v(self.T)
        )


@dataclasses.dataclass(frozen=True)
class LayeredWitness:
    """A greedy run over ``ground`` whose size-``i`` prefix loses to ``better``.

    ``prices`` is empty for the weakly well-layered check (zero prices).
    """

    ground: Bundle
    trajectory: tuple
    i: int
    better: Bundle
    prices: tuple = ()

    def reproduces(self, v: Valuation) -> bool:
        p = self.prices or (0,) * v.m

        def vp(S):
            return v(S) - sum((p[g] for g in members(S)), 0)

        prefix = 0
        for g in self.trajectory[: self.i]:
            prefix |= 1 << g
        return (
            size(self.better) == self.i
            and self.better & ~self.ground == 0
            and vp(self.better) > vp(prefix)
        )


@dataclasses.dataclass(frozen=True)
class ClassCheckResult:
    property: str
    holds: bool
    witness: object = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        out = {"property": self.property, "verdict": "holds" if self.holds else "fails"}
        if self.witness is not None:
            w = {}
            for f in dataclasses.fields(self.witness):
                val = getattr(self.witness, f.name)
                if f.name in ("S", "T", "ground", "better"):
                    val = members(val)
                elif f.name in ("trajectory", "prices"):
                    val = [x if isinstance(x, int) else str(x) for x in val]
                w[f.name] = val
            out["witness"] = w
        return out


def _table(v: Valuation, cap: int, what: str) -> list[Value]:
    limits.require(f"{what}: goods", v.m, cap)
    return v.table()


def check_monotone(v: Valuation) -> ClassCheckResult:
    t = _table(v, limits.get_limits().brute_force_m, "check_monotone")
    m = v.m
    for S in range(1 << m):
        for g in range(m):
            G = 1 << g
            if not S & G and t[S | G] < t[S]:
                return ClassCheckResult("monotone", False, MonotoneWitness(S, S | G))
    return ClassCheckResult("monotone", True)


def check_submodular(v: Valuation) -> ClassCheckResult:
    """Local form: for all ``S`` and distinct ``x, y ∉ S``,
    ``v(S+x) - v(S) >= v(S+y+x) - v(S+y)``."""
    t = _table(v, limits.get_limits().brute_force_m, "check_submodular")
    m = v.m
    for S in range(1 << m):
        for y in range(m):
            Y = 1 << y
            if S & Y:
                continue
            T = S | Y
            for x in range(m):
                X = 1 << x
                if T & X:
                    continue
                if t[S | X] - t[S] < t[T | X] - t[T]:
                    return ClassCheckResult("submodular", False, SubmodularWitness(S, T, x))
    return ClassCheckResult("submodular", True)


def check_cancelable(v: Valuation) -> ClassCheckResult:
    """For each ``x``, sweep the subsets of ``M - x`` in order of ``v``: a
    violation is a pair with ``v(S) <= v(T)`` but ``v(S+x) > v(T+x)``."""
    t = _table(v, limits.get_limits().brute_force_m, "check_cancelable")
    m = v.m
    for x in range(m):
        X = 1 << x
        rest = [S for S in range(1 << m) if not S & X]
        rest.sort(key=lambda S: (t[S], S))
        best_S = None
        for _, group in groupby(rest, key=lambda S: t[S]):
            group = list(group)
            for S in group:
                if best_S is None or t[S | X] > t[best_S | X]:
                    best_S = S
            for T in group:
                if t[best_S | X] > t[T | X]:
                    return ClassCheckResult("cancelable", False, CancelableWitness(best_S, T, x))
    return ClassCheckResult("cancelable", True)


def greedy_trajectories(v: Valuation, ground: Bundle) -> list[tuple[int, ...]]:
    """Every maximal greedy sequence over ``ground``, branching on all ties."""
    limits.require("greedy_trajectories: |ground|", size(ground), limits.get_limits().trajectory_m)
    out = []

    def extend(S, seq):
        cand = [g for g in members(ground & ~S)]
        if not cand:
            out.append(tuple(seq))
            return
        vals = {g: v(S | 1 << g) for g in cand}
        top = max(vals.values())
        for g in cand:
            if vals[g] == top:
                seq.append(g)
                extend(S | 1 << g, seq)
                seq.pop()

    extend(0, [])
    return out


def _best_by_size(t: Sequence[Value], m: int) -> list[list[tuple[Value, Bundle]]]:
    """``best[G][i]`` = (max value, lowest-numbered argmax) over size-``i`` subsets of ``G``."""
    best: list[list] = [None] * (1 << m)
    best[0] = [(t[0], 0)]
    for G in range(1, 1 << m):
        k = size(G)
        row = [None] * (k + 1)
        row[k] = (t[G], G)
        for x in members(G):
            sub = best[G & ~(1 << x)]
            for i in range(k):
                cand = sub[i]
                cur = row[i]
                if cur is None or cand[0] > cur[0] or (cand[0] == cur[0] and cand[1] < cur[1]):
                    row[i] = cand
        best[G] = row
    return best


def _greedy_states(t: Sequence[Value], ground: Bundle):
    """BFS over every set reachable as a greedy prefix (all tie branches),
    yielding ``(S, parent_map)``. Prefix sets, not sequences, determine the
    next greedy step, so this covers every trajectory."""
    parent = {0: None}
    queue = deque([0])
    while queue:
        S = queue.popleft()
        yield S, parent
        cand = members(ground & ~S)
        if not cand:
            continue
        top = max(t[S | 1 << g] for g in cand)
        for g in cand:
            nxt = S | 1 << g
            if t[nxt] == top and nxt not in parent:
                parent[nxt] = (S, g)
                queue.append(nxt)


def _trajectory(parent, S) -> tuple[int, ...]:
    seq = []
    while parent[S] is not None:
        S, g = parent[S]
        seq.append(g)
    return tuple(reversed(seq))


def check_weakly_well_layered(v: Valuation) -> ClassCheckResult:
    """For every ground set and every greedy prefix (all tie branches), the
    prefix must attain the best value among subsets of the ground set of the
    same size."""
    t = _table(v, limits.get_limits().wwl_m, "check_weakly_well_layered")
    best = _best_by_size(t, v.m)
    for G in range(1 << v.m):
        row = best[G]
        for S, parent in _greedy_states(t, G):
            top, arg = row[size(S)]
            if t[S] < top:
                w = LayeredWitness(G, _trajectory(parent, S), size(S), arg)
                return ClassCheckResult("weakly_well_layered", False, w)
    return ClassCheckResult("weakly_well_layered", True)


def _priced_table(v: Valuation, p: Sequence[Value]) -> list[Value]:
    if len(p) != v.m:
        raise ValueError(f"price vector has length {len(p)}, expected {v.m}")
    t = v.table()
    out = [0] * (1 << v.m)
    for S in range(1, 1 << v.m):
        low = S & -S
        g = low.bit_length() - 1
        out[S] = out[S ^ low] - p[g]
    return [t[S] + out[S] for S in range(1 << v.m)]


def greedy_with_prices(v: Valuation, p: Sequence[Value]) -> list[tuple[int, Value]]:
    """Greedy on ``v_p(S) = v(S) - p(S)`` over all goods, lowest good id on
    ties. Returns the picks with the running ``v_p`` value."""
    if len(p) != v.m:
        raise ValueError(f"price vector has length {len(p)}, expected {v.m}")
    S = 0
    paid = 0
    out = []
    for _ in range(v.m):
        best_g, best_val = None, None
        for g in range(v.m):
            if S >> g & 1:
                continue
            val = v(S | 1 << g) - (paid + p[g])
            if best_val is None or val > best_val:
                best_g, best_val = g, val
        S |= 1 << best_g
        paid += p[best_g]
        out.append((best_g, best_val))
    return out


def check_well_layered_at_price(v: Valuation, p: Sequence[Value]) -> ClassCheckResult:
    """Greedy on ``v_p`` (all tie branches) must give size-optimal prefixes.

    This tests a single price vector; it cannot decide well-layeredness,
    which quantifies over all prices.
    """
    limits.require("check_well_layered_at_price: goods", v.m, limits.get_limits().brute_force_m)
    t = _priced_table(v, p)
    m = v.m
    top = [None] * (m + 1)
    for S in range(1 << m):
        k = size(S)
        if top[k] is None or t[S] > t[top[k]]:
            top[k] = S
    for S, parent in _greedy_states(t, full(m)):
        arg = top[size(S)]
        if t[S] < t[arg]:
            w = LayeredWitness(full(m), _trajectory(parent, S), size(S), arg, tuple(p))
            return ClassCheckResult("well_layered_at_price", False, w)
    return ClassCheckResult("well_layered_at_price", True)


CHECKS = {
    "monotone": check_monotone,
    "submodular": check_submodular,
    "cancelable": check_cancelable,
    "wwl": check_weakly_well_layered,
}
