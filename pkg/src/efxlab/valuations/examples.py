"""The three worked examples, with the class verdicts each one is known to have."""

from __future__ import annotations

from typing import NamedTuple

from ..bundles import bundle, members
from .base import BudgetAdditive, Table, Valuation

NAMES = "abcd"


class CanonicalExample(NamedTuple):
    valuation: Valuation
    expected: dict
    description: str


def example1() -> BudgetAdditive:
    return BudgetAdditive((2, 2, 4), 4)


def example2() -> Table:
    return Table(2, (0, 0, 0, 1))


def example3() -> Table:
    a, b, c, d = (1 << i for i in range(4))
    fixed = {
        a: 11, b: 10, c: 10, d: 16,
        a | b: 15, a | c: 15, b | c: 17, a | b | c: 18,
    }
    vals = []
    for S in range(16):
        if S in fixed:
            vals.append(fixed[S])
        elif S & d and len(members(S)) >= 2:
            vals.append(18)
        else:
            vals.append(0)
    return Table(4, tuple(vals))


def canonical_examples() -> dict[str, CanonicalExample]:
    return {
        "example1": CanonicalExample(
            example1(),
            {
                "monotone": True,
                "submodular": True,
                "wwl": True,
                "well_layered_at_price": {(1, 1, 2): False},
            },
            "budget-additive, weights (2,2,4), budget 4: weakly well-layered, "
            "not well-layered at prices (1,1,2)",
        ),
        "example2": CanonicalExample(
            example2(),
            {"monotone": True, "submodular": False, "wwl": True},
            "two goods, value 1 only for the pair: well-layered, not submodular",
        ),
        "example3": CanonicalExample(
            example3(),
            {"monotone": True, "submodular": True, "wwl": False, "cancelable": False},
            "four goods: submodular but not weakly well-layered; Greedy EFX fails",
        ),
    }


def goods(names: str) -> int:
    """``goods("bc")`` -> bundle of goods b and c."""
    return bundle(NAMES.index(ch) for ch in names)
