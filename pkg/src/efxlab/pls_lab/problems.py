"""Flip and Kneser local-search problems and a generic local-search runner.

Feasible points are ``int`` bit vectors: bit ``i`` is circuit input ``i``.
"""

from __future__ import annotations

import dataclasses
from functools import cached_property
from itertools import combinations
from typing import Iterator

from ..bundles import full, size
from ..circuits import BoolCircuit, evaluate, evaluate_batch, negate_outputs

MINIMIZE = "minimize"
MAXIMIZE = "maximize"


def _better(a: int, b: int, direction: str) -> bool:
    return a < b if direction == MINIMIZE else a > b


class _Problem:
    circuit: BoolCircuit
    direction: str

    def cost(self, x: int) -> int:
        return evaluate(self.circuit, x)

    def improves(self, a: int, b: int) -> bool:
        """True if cost ``a`` is strictly better than cost ``b``."""
        return _better(a, b, self.direction)

    @cached_property
    def costs(self) -> dict[int, int]:
        """Cost of every feasible point, evaluated in one bit-parallel pass."""
        pts = list(self.points())
        return dict(zip(pts, evaluate_batch(self.circuit, pts)))

    def is_local_optimum(self, x: int) -> bool:
        here = self.cost(x)
        return not any(self.improves(self.cost(y), here) for y in self.neighbors(x))

    def local_optima(self) -> list[int]:
        c = self.costs
        return [x for x in c if not any(self.improves(c[y], c[x]) for y in self.neighbors(x))]


@dataclasses.dataclass(frozen=True, eq=False)
class FlipInstance(_Problem):
    circuit: BoolCircuit
    direction: str = MINIMIZE

    @property
    def n(self) -> int:
        return self.circuit.n_inputs

    def feasible(self, x: int) -> bool:
        return 0 <= x < 1 << self.n

    def points(self) -> Iterator[int]:
        return iter(range(1 << self.n))

    def neighbors(self, x: int) -> list[int]:
        return [x ^ 1 << i for i in range(self.n)]

    def to_json(self) -> dict:
        return {"kind": "flip", "direction": self.direction, "circuit": self.circuit.to_json()}


@dataclasses.dataclass(frozen=True, eq=False)
class KneserInstance(_Problem):
    """Local search on the odd Kneser graph K(2k+1, k): points are the
    weight-``k`` vectors, neighbours are the disjoint ones."""

    circuit: BoolCircuit
    k: int
    direction: str = MAXIMIZE

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.circuit.n_inputs != 2 * self.k + 1:
            raise ValueError(f"Kneser circuit needs {2 * self.k + 1} inputs, has {self.circuit.n_inputs}")
        if self.direction not in (MINIMIZE, MAXIMIZE):
            raise ValueError(f"bad direction {self.direction!r}")

    @property
    def n(self) -> int:
        return 2 * self.k + 1

    def feasible(self, x: int) -> bool:
        return 0 <= x < 1 << self.n and size(x) == self.k

    def points(self) -> Iterator[int]:
        for combo in combinations(range(self.n), self.k):
            yield sum(1 << i for i in combo)

    def neighbors(self, x: int) -> list[int]:
        """The ``k + 1`` k-subsets of the complement of ``x``."""
        comp = full(self.n) & ~x
        out = []
        rest = comp
        while rest:
            low = rest & -rest
            out.append(comp ^ low)
            rest ^= low
        return out

    def negated(self) -> "KneserInstance":
        flipped = MAXIMIZE if self.direction == MINIMIZE else MINIMIZE
        return KneserInstance(negate_outputs(self.circuit), self.k, flipped)

    def to_json(self) -> dict:
        return {"kind": "kneser", "k": self.k, "direction": self.direction, "circuit": self.circuit.to_json()}


def problem_from_json(obj: dict):
    kind = obj.get("kind")
    circuit = BoolCircuit.from_json(obj["circuit"])
    if kind == "flip":
        return FlipInstance(circuit, obj.get("direction", MINIMIZE))
    if kind == "kneser":
        return KneserInstance(circuit, int(obj["k"]), obj.get("direction", MAXIMIZE))
    raise ValueError(f"unknown problem kind {kind!r}")


@dataclasses.dataclass(frozen=True)
class LocalSearchResult:
    point: int
    steps: int
    trajectory: tuple[int, ...]


def local_search(problem, start: int, pivot: str = "best") -> LocalSearchResult:
    """Follow improving neighbours until none is left.

    ``pivot="best"`` moves to the best neighbour (first in neighbour order
    on ties); ``"first"`` moves to the first improving one.
    """
    if pivot not in ("best", "first"):
        raise ValueError(f"unknown pivot rule {pivot!r}")
    if not problem.feasible(start):
        raise ValueError(f"start point {start:#b} is infeasible")
    x = start
    here = problem.cost(x)
    path = [x]
    while True:
        nxt, nxt_cost = None, here
        for y in problem.neighbors(x):
            c = problem.cost(y)
            if problem.improves(c, nxt_cost):
                nxt, nxt_cost = y, c
                if pivot == "first":
                    break
        if nxt is None:
            return LocalSearchResult(x, len(path) - 1, tuple(path))
        x, here = nxt, nxt_cost
        path.append(x)
