from fractions import Fraction
from math import factorial

import pytest

import oracles
from efxlab import generators
from efxlab.bundles import full
from efxlab.errors import LimitExceededError
from efxlab.limits import Limits, set_limits
from efxlab.rng import SplitMix64
from efxlab.valuations import (
    Additive,
    BudgetAdditive,
    Table,
    UnitDemand,
    apply_increasing,
    budget_cap,
    check_cancelable,
    check_monotone,
    check_submodular,
    check_weakly_well_layered,
    check_well_layered_at_price,
    example1,
    example2,
    example3,
    goods,
    greedy_trajectories,
    greedy_with_prices,
)


def _mixed_tables(seed, count, m_max):
    """Random tables from several families so both verdicts occur."""
    rng = SplitMix64(seed)
    kinds = ["random-table", "monotone-table", "coverage-submodular", "unit-demand", "budget-additive"]
    for i in range(count):
        kind = kinds[i % len(kinds)]
        yield generators.KINDS[kind](rng, rng.randint(1, m_max)).to_table()


# monotone


def test_monotone_examples():
    assert check_monotone(example3()).holds
    bad = Table(2, (0, 1, 0, 0))
    res = check_monotone(bad)
    assert not res.holds
    assert (res.witness.S, res.witness.T) == (goods("a"), goods("ab"))
    assert res.witness.reproduces(bad)


def test_monotone_matches_direct():
    for v in _mixed_tables(1, 80, 4):
        assert check_monotone(v).holds == oracles.monotone_direct(v)


# submodular


def test_submodular_examples():
    assert check_submodular(example3()).holds
    res = check_submodular(example2())
    assert not res.holds
    assert (res.witness.S, res.witness.T, res.witness.x) == (0, goods("a"), 1)
    assert res.witness.reproduces(example2())
    assert check_submodular(Additive((5, 0, 3, "1/2"))).holds


def test_submodular_local_form_matches_direct():
    seen = set()
    for v in _mixed_tables(2, 150, 5):
        res = check_submodular(v)
        assert res.holds == oracles.submodular_direct(v)
        if not res.holds:
            assert res.witness.reproduces(v)
        seen.add(res.holds)
    assert seen == {True, False}


# cancelable


def test_cancelable_example3_fails():
    v = example3()
    assert oracles.cancelable_direct(v) is False
    res = check_cancelable(v)
    assert not res.holds and res.witness.reproduces(v)


@pytest.mark.parametrize("kind", ["unit-demand", "budget-additive"])
def test_cancelable_holds_for_unit_demand_and_budget_additive(kind):
    rng = SplitMix64(3)
    for _ in range(20):
        m = rng.randint(1, 6)
        v = generators.KINDS[kind](rng, m)
        assert check_cancelable(v).holds


def test_cancelable_sweep_matches_direct():
    seen = set()
    for v in _mixed_tables(4, 120, 4):
        res = check_cancelable(v)
        assert res.holds == oracles.cancelable_direct(v)
        if not res.holds:
            assert res.witness.reproduces(v)
        seen.add(res.holds)
    assert seen == {True, False}


# greedy trajectories / weakly well-layered


def test_trajectories_examples():
    assert greedy_trajectories(Additive((3, 2, 1)), 0b111) == [(0, 1, 2)]
    flat = Table(4, tuple(bin(S).count("1") for S in range(16)))
    assert len(greedy_trajectories(flat, 0b1111)) == factorial(4)
    assert greedy_trajectories(example1(), 0b111)[0][0] == 2


def test_trajectories_limit(restore_limits):
    set_limits(Limits(trajectory_m=2))
    with pytest.raises(LimitExceededError):
        greedy_trajectories(Additive((1, 1, 1)), 0b111)


def test_wwl_example3_witness():
    v = example3()
    res = check_weakly_well_layered(v)
    assert not res.holds
    w = res.witness
    # greedy over {a,b,c} takes a first and stalls at 15 < v({b,c}) = 17
    assert w.ground == goods("abc") and w.i == 2 and w.better == goods("bc")
    assert w.trajectory[0] == 0
    assert w.reproduces(v)


def test_wwl_examples_hold():
    assert check_weakly_well_layered(example1()).holds
    assert check_weakly_well_layered(example2()).holds


def test_wwl_matches_trajectory_oracle():
    seen = set()
    for v in _mixed_tables(5, 150, 4):
        res = check_weakly_well_layered(v)
        assert res.holds == oracles.wwl_direct(v)
        seen.add(res.holds)
    assert seen == {True, False}


@pytest.mark.parametrize("kind", ["budget-additive", "oxs", "unit-demand", "additive"])
def test_wwl_holds_for_structured_classes(kind):
    rng = SplitMix64(6)
    for _ in range(15):
        assert check_weakly_well_layered(generators.KINDS[kind](rng, rng.randint(1, 6))).holds


def test_wwl_closure_and_cancelable_implication():
    rng = SplitMix64(8)
    wwl_tables = 0
    for _ in range(300):
        v = generators.monotone_table(rng, rng.randint(2, 4), hi=3)
        holds = check_weakly_well_layered(v).holds
        if check_cancelable(v).holds:
            assert holds
        if not holds:
            continue
        wwl_tables += 1
        slope = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assert check_weakly_well_layered(apply_increasing(v, lambda x: slope * x + 3)).holds
        assert check_weakly_well_layered(apply_increasing(v, lambda x: x**3)).holds
        cap = rng.randint(0, v(full(v.m)))
        assert check_weakly_well_layered(budget_cap(v, cap)).holds
    assert wwl_tables >= 20


def test_wwl_size_limit(restore_limits):
    with pytest.raises(LimitExceededError):
        check_weakly_well_layered(Additive((1,) * 11))


# price greedy


def test_greedy_with_prices_example1():
    picks = greedy_with_prices(example1(), (1, 1, 2))
    assert picks[0] == (2, 2)


def test_greedy_with_prices_additive_zero_prices():
    picks = greedy_with_prices(Additive((1, 5, 3, 4)), (0, 0, 0, 0))
    assert [g for g, _ in picks] == [1, 3, 2, 0]


def test_prohibitive_prices_keep_greedy_inside_ground():
    rng = SplitMix64(9)
    for _ in range(30):
        m = rng.randint(2, 6)
        v = generators.monotone_table(rng, m)
        ground = rng.randbelow(1 << m)
        high = v((1 << m) - 1) + 1
        p = tuple(0 if ground >> g & 1 else high for g in range(m))
        picks = [g for g, _ in greedy_with_prices(v, p)]
        inside = bin(ground).count("1")
        assert all(ground >> g & 1 for g in picks[:inside])


def test_well_layered_at_price_example1():
    res = check_well_layered_at_price(example1(), (1, 1, 2))
    assert not res.holds
    assert res.witness.i == 2 and res.witness.better == goods("ab")
    assert res.witness.trajectory[0] == 2
    assert res.witness.reproduces(example1())


def test_well_layered_at_price_example2_sampled():
    rng = SplitMix64(10)
    for _ in range(50):
        p = (rng.random_fraction(-5, 5, 7), rng.random_fraction(-5, 5, 7))
        assert check_well_layered_at_price(example2(), p).holds


def test_well_layered_at_price_additive():
    rng = SplitMix64(11)
    for _ in range(30):
        m = rng.randint(1, 6)
        v = generators.additive(rng, m)
        p = tuple(rng.randint(-10, 30) for _ in range(m))
        assert check_well_layered_at_price(v, p).holds


def test_price_vector_length():
    with pytest.raises(ValueError):
        check_well_layered_at_price(example1(), (1, 1))


def test_class_check_json():
    out = check_submodular(example2()).to_json()
    assert out == {"property": "submodular", "verdict": "fails", "witness": {"S": [], "T": [0], "x": 1}}
    assert check_monotone(UnitDemand((1, 2))).to_json() == {"property": "monotone", "verdict": "holds"}
    assert BudgetAdditive((1,), 1).m == 1
