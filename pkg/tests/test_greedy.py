import pytest

from efxlab import generators
from efxlab.allocation import Allocation, is_efx
from efxlab.errors import VerificationError
from efxlab.greedy import (
    GreedyStep,
    cut_and_choose,
    first_partial_efx_failure,
    greedy_efx,
    greedy_partial_efx_invariant,
)
from efxlab.rng import SplitMix64
from efxlab.valuations import Additive, BudgetAdditive, Table, check_weakly_well_layered, example1, example3, goods


def test_example3_greedy_fails():
    v = example3()
    X, trace = greedy_efx(v, 2)
    assert X.bundles == (goods("d"), goods("abc"))
    assert trace.log_lines() == ["1 0 3 16", "2 1 0 11", "3 1 1 15", "4 1 2 18"]
    assert not is_efx(v, X)
    assert first_partial_efx_failure(v, trace) == 4


def test_no_goods():
    X, trace = greedy_efx(Additive(()), 3)
    assert X.bundles == (0, 0, 0) and trace.steps == ()
    assert greedy_partial_efx_invariant(Additive(()), trace)


def test_needs_an_agent():
    with pytest.raises(ValueError):
        greedy_efx(Additive((1,)), 0)


def test_budget_additive_example():
    v = example1()
    X, trace = greedy_efx(v, 2)
    assert is_efx(v, X)
    assert trace.steps[0] == GreedyStep(1, 0, 2, 4)


def test_ties_go_to_lowest_ids():
    X, trace = greedy_efx(Additive((1, 1, 1, 1)), 2)
    assert [(s.agent, s.good) for s in trace.steps] == [(0, 0), (1, 1), (0, 2), (1, 3)]


def test_partial_invariant_additive():
    rng = SplitMix64(30)
    for _ in range(50):
        v = generators.additive(rng, rng.randint(0, 7))
        _, trace = greedy_efx(v, rng.randint(2, 4))
        assert greedy_partial_efx_invariant(v, trace)


def test_wwl_implies_greedy_efx():
    rng = SplitMix64(31)
    positives = 0
    for _ in range(60):
        v = generators.monotone_table(rng, rng.randint(1, 5), hi=3)
        if check_weakly_well_layered(v):
            positives += 1
            for n in (2, 3):
                X, _ = greedy_efx(v, n)
                assert is_efx(v, X)
    assert positives > 0


def test_random_ties_stay_efx_and_are_seeded():
    v = Additive((2, 2, 2, 1, 1))
    runs = set()
    for seed in range(10):
        X, _ = greedy_efx(v, 2, rng=SplitMix64(seed))
        assert is_efx(v, X)
        runs.add(X.bundles)
        assert greedy_efx(v, 2, rng=SplitMix64(seed))[0] == X
    assert len(runs) > 1


def test_deterministic():
    rng = SplitMix64(32)
    v = generators.oxs(rng, 6)
    assert greedy_efx(v, 3) == greedy_efx(v, 3)


def test_cut_and_choose_examples():
    v1 = Additive((3, 2, 1))
    # agent 0 cuts {a} | {b,c}; agent 1 prefers {a}
    X = cut_and_choose(v1, Additive((5, 1, 1)), verify=True)
    assert X.bundles == (goods("bc"), goods("a"))
    # chooser indifferent: keeps the second piece
    Y = cut_and_choose(v1, Additive((1, 1, 0)), verify=True)
    assert Y.bundles == (goods("a"), goods("bc"))


def test_cut_and_choose_random_wwl():
    rng = SplitMix64(33)
    for _ in range(100):
        m = rng.randint(0, 6)
        v1 = generators.budget_additive(rng, m)
        v2 = generators.monotone_table(rng, m) if m <= 4 else generators.additive(rng, m)
        X = cut_and_choose(v1, v2, verify=True)
        assert X.is_complete


def test_cut_and_choose_verify_raises():
    v = example3()
    with pytest.raises(VerificationError) as err:
        cut_and_choose(v, v, verify=True)
    assert not err.value.verdict
    assert cut_and_choose(v, v).is_complete


def test_cut_and_choose_mismatch():
    with pytest.raises(ValueError):
        cut_and_choose(Additive((1,)), Additive((1, 2)))
