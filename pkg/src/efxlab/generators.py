"""Seeded instance generators (SplitMix64, so outputs are reproducible)."""

from __future__ import annotations

from .bundles import members, size
from .circuits import BoolCircuit, random_circuit
from .rng import SplitMix64
from .valuations import OXS, Additive, BudgetAdditive, Table, UnitDemand, Valuation


def additive(rng: SplitMix64, m: int, hi: int = 20) -> Additive:
    return Additive(tuple(rng.randint(0, hi) for _ in range(m)))


def budget_additive(rng: SplitMix64, m: int, hi: int = 20) -> BudgetAdditive:
    w = tuple(rng.randint(0, hi) for _ in range(m))
    return BudgetAdditive(w, rng.randint(0, max(1, sum(w))))


def unit_demand(rng: SplitMix64, m: int, hi: int = 20) -> UnitDemand:
    return UnitDemand(tuple(rng.randint(0, hi) for _ in range(m)))


def oxs(rng: SplitMix64, m: int, slots: int | None = None, hi: int = 20) -> OXS:
    slots = slots or rng.randint(1, max(1, m))
    return OXS(tuple(tuple(rng.randint(0, hi) for _ in range(slots)) for _ in range(m)))


def coverage(rng: SplitMix64, m: int, universe: int | None = None, hi: int = 10) -> Table:
    """Weighted coverage: good ``g`` covers a random subset of a universe;
    a bundle is worth the total weight it covers. Monotone and submodular."""
    universe = universe or 2 * m + 2
    weights = [rng.randint(1, hi) for _ in range(universe)]
    covers = [rng.randbelow(1 << universe) for _ in range(m)]
    vals = []
    for S in range(1 << m):
        covered = 0
        for g in members(S):
            covered |= covers[g]
        vals.append(sum(weights[e] for e in members(covered)))
    return Table(m, tuple(vals))


def monotone_table(rng: SplitMix64, m: int, hi: int = 10) -> Table:
    """Each bundle gets a random nonnegative increment over its best
    one-smaller subset, so values never drop along any chain."""
    vals = [0] * (1 << m)
    for S in sorted(range(1, 1 << m), key=size):
        base = max(vals[S & ~(1 << g)] for g in members(S))
        vals[S] = base + rng.randint(0, hi)
    return Table(m, tuple(vals))


def random_table(rng: SplitMix64, m: int, hi: int = 10) -> Table:
    """Arbitrary normalized table, usually not monotone."""
    return Table(m, (0,) + tuple(rng.randint(0, hi) for _ in range((1 << m) - 1)))


def flip_circuit(rng: SplitMix64, p: int, max_gates: int = 40, max_width: int = 4) -> BoolCircuit:
    """Random Flip cost circuit with ``p`` inputs and at most ``max_gates``
    gates in total (input gates included)."""
    n_gates = rng.randint(1, max(1, max_gates - p))
    return random_circuit(rng, p, n_gates, rng.randint(1, max_width))


KINDS = {
    "additive": additive,
    "budget-additive": budget_additive,
    "unit-demand": unit_demand,
    "oxs": oxs,
    "coverage-submodular": coverage,
    "monotone-table": monotone_table,
    "random-table": random_table,
}


def generate(kind: str, m: int, seed: int) -> Valuation:
    try:
        make = KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}; choose from {sorted(KINDS)}") from None
    return make(SplitMix64(seed), m)
