"""Valuation variants evaluated with exact arithmetic."""

from __future__ import annotations

import dataclasses
from functools import cached_property
from typing import Callable, Sequence

from .. import limits
from ..bundles import (
    Bundle,
    Value,
    check_width,
    dump_value,
    iter_members,
    normalize,
    parse_value,
)
from ..errors import ParseError


class Valuation:
    """Base class. Subclasses implement ``_value`` on a width-checked bundle.

    Instances are immutable; ``table()`` materializes all ``2**m`` values
    once and caches them.
    """

    m: int

    def value(self, S: Bundle) -> Value:
        check_width(S, self.m)
        return normalize(self._value(S))

    __call__ = value

    def _value(self, S: Bundle) -> Value:
        raise NotImplementedError

    def marginal(self, S: Bundle, g: int) -> Value:
        if S >> g & 1:
            raise ValueError(f"good {g} already in bundle")
        return self.value(S | 1 << g) - self.value(S)

    def table(self) -> list[Value]:
        """All values indexed by bundle bits (cached)."""
        cached = self.__dict__.get("_table_cache")
        if cached is None:
            limits.require("table materialization m", self.m, limits.get_limits().table_m)
            cached = self._build_table()
            # frozen dataclasses forbid setattr; the cache is not part of identity
            self.__dict__["_table_cache"] = cached
        return cached

    def _build_table(self) -> list[Value]:
        return [normalize(self._value(S)) for S in range(1 << self.m)]

    def to_table(self) -> "Table":
        return Table(self.m, tuple(self.table()))

    def to_json(self) -> dict:
        raise TypeError(f"{type(self).__name__} has no JSON form; materialize with to_table()")


def _values(raw: Sequence, what: str) -> tuple:
    vals = tuple(normalize(parse_value(x)) for x in raw)
    for x in vals:
        if x < 0:
            raise ValueError(f"{what} must be nonnegative, got {x}")
    return vals


@dataclasses.dataclass(frozen=True, eq=True)
class Additive(Valuation):
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", _values(self.weights, "weights"))

    @property
    def m(self) -> int:
        return len(self.weights)

    def _value(self, S):
        w = self.weights
        return sum((w[g] for g in iter_members(S)), 0)

    def to_json(self):
        return {"type": "additive", "weights": [dump_value(x) for x in self.weights]}


@dataclasses.dataclass(frozen=True, eq=True)
class BudgetAdditive(Valuation):
    weights: tuple
    budget: Value

    def __post_init__(self):
        object.__setattr__(self, "weights", _values(self.weights, "weights"))
        object.__setattr__(self, "budget", _values([self.budget], "budget")[0])

    @property
    def m(self) -> int:
        return len(self.weights)

    def _value(self, S):
        w = self.weights
        return min(self.budget, sum((w[g] for g in iter_members(S)), 0))

    def to_json(self):
        return {
            "type": "budget_additive",
            "weights": [dump_value(x) for x in self.weights],
            "budget": dump_value(self.budget),
        }


@dataclasses.dataclass(frozen=True, eq=True)
class UnitDemand(Valuation):
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", _values(self.weights, "weights"))

    @property
    def m(self) -> int:
        return len(self.weights)

    def _value(self, S):
        w = self.weights
        return max((w[g] for g in iter_members(S)), default=0)

    def to_json(self):
        return {"type": "unit_demand", "weights": [dump_value(x) for x in self.weights]}


def max_weight_assignment(weights: Sequence[Sequence[Value]]) -> Value:
    """Maximum total weight of a matching in a bipartite graph with
    nonnegative weights ``weights[row][col]`` (rows need not be matched).

    Exact Hungarian algorithm (shortest augmenting paths with potentials) on
    the zero-padded square cost matrix ``-weights``.
    """
    rows = len(weights)
    cols = len(weights[0]) if rows else 0
    n = max(rows, cols)
    if n == 0:
        return 0

    def cost(i, j):
        if i < rows and j < cols:
            return -weights[i][j]
        return 0

    # 1-indexed potentials; column 0 is the virtual root
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = None
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost(i0 - 1, j - 1) - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if delta is None or minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    total = 0
    for j in range(1, n + 1):
        i = match[j]
        if i and i - 1 < rows and j - 1 < cols:
            total += weights[i - 1][j - 1]
    return normalize(total)


@dataclasses.dataclass(frozen=True, eq=True)
class OXS(Valuation):
    """``matrix[g][s]`` is the weight of assigning good ``g`` to slot ``s``;
    the value of a bundle is its best matching into the slots."""

    matrix: tuple

    def __post_init__(self):
        rows = tuple(_values(row, "OXS weights") for row in self.matrix)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("OXS matrix rows must have equal length")
        object.__setattr__(self, "matrix", rows)

    @property
    def m(self) -> int:
        return len(self.matrix)

    @property
    def slots(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    def _value(self, S):
        return max_weight_assignment([self.matrix[g] for g in iter_members(S)])

    def to_json(self):
        return {"type": "oxs", "matrix": [[dump_value(x) for x in row] for row in self.matrix]}


@dataclasses.dataclass(frozen=True, eq=True)
class Table(Valuation):
    m: int
    values: tuple

    def __post_init__(self):
        limits.require("table valuation m", self.m, limits.get_limits().table_m)
        vals = _values(self.values, "table values")
        if len(vals) != 1 << self.m:
            raise ValueError(f"table needs {1 << self.m} entries, got {len(vals)}")
        if vals[0] != 0:
            raise ValueError("table must be normalized: value of empty bundle is 0")
        object.__setattr__(self, "values", vals)

    def _value(self, S):
        return self.values[S]

    def _build_table(self):
        return list(self.values)

    def to_json(self):
        return {"type": "table", "m": self.m, "values": [dump_value(x) for x in self.values]}


class ComposedRule(Valuation):
    """Valuation given by an arbitrary pure procedure on bundles.

    Results are memoized; the procedure must be deterministic. Unlike
    :class:`Table`, no normalization is enforced.
    """

    def __init__(self, m: int, rule: Callable[[Bundle], Value], name: str = "rule"):
        self.m = m
        self.rule = rule
        self.name = name
        self._memo: dict[Bundle, Value] = {}

    def _value(self, S):
        try:
            return self._memo[S]
        except KeyError:
            val = self._memo[S] = normalize(self.rule(S))
            return val

    def __repr__(self):
        return f"ComposedRule(m={self.m}, name={self.name!r})"


def table_from_dict(m: int, values: dict) -> Table:
    """Build a table from ``{bundle_bits: value}``; missing bundles get 0."""
    vals = [0] * (1 << m)
    for S, x in values.items():
        vals[S] = x
    return Table(m, tuple(vals))


def apply_increasing(v: Valuation, f: Callable[[Value], Value], name: str = "f∘v") -> ComposedRule:
    """Pointwise post-composition ``f ∘ v``."""
    return ComposedRule(v.m, lambda S: f(v.value(S)), name)


def budget_cap(v: Valuation, B: Value) -> ComposedRule:
    """``S ↦ min(v(S), B)``."""
    return ComposedRule(v.m, lambda S: min(v.value(S), B), f"min(v,{B})")


def valuation_from_json(obj: dict) -> Valuation:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ParseError("valuation must be an object with a 'type' field")
    kind = obj["type"]
    try:
        if kind == "additive":
            return Additive(tuple(obj["weights"]))
        if kind == "budget_additive":
            return BudgetAdditive(tuple(obj["weights"]), obj["budget"])
        if kind == "unit_demand":
            return UnitDemand(tuple(obj["weights"]))
        if kind == "oxs":
            return OXS(tuple(tuple(r) for r in obj["matrix"]))
        if kind == "table":
            return Table(int(obj["m"]), tuple(obj["values"]))
    except KeyError as exc:
        raise ParseError(f"valuation of type {kind!r} missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid {kind!r} valuation: {exc}") from exc
    if kind not in _EXTRA_TYPES:
        from .. import pls_lab  # noqa: F401  (registers reduction valuation types)
    hook = _EXTRA_TYPES.get(kind)
    if hook is None:
        raise ParseError(f"unknown valuation type {kind!r}")
    return hook(obj)


_EXTRA_TYPES: dict[str, Callable[[dict], Valuation]] = {}


def register_json_type(kind: str, loader: Callable[[dict], Valuation]) -> None:
    _EXTRA_TYPES[kind] = loader
