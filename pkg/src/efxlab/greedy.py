"""Greedy EFX for identical agents, and cut-and-choose for two agents."""

from __future__ import annotations

import dataclasses

from .allocation import Allocation, is_efx
from .bundles import Value, full, members
from .errors import VerificationError
from .rng import SplitMix64
from .valuations import Valuation


@dataclasses.dataclass(frozen=True)
class GreedyStep:
    round: int
    agent: int
    good: int
    value: Value

    def log_line(self) -> str:
        return f"{self.round} {self.agent} {self.good} {self.value}"


@dataclasses.dataclass(frozen=True)
class GreedyTrace:
    n: int
    m: int
    steps: tuple[GreedyStep, ...] = ()

    def log_lines(self) -> list[str]:
        return [s.log_line() for s in self.steps]


def _pick(candidates: list[int], rng: SplitMix64 | None) -> int:
    if rng is None or len(candidates) == 1:
        return candidates[0]
    return rng.choice(candidates)


def greedy_efx(v: Valuation, n: int, rng: SplitMix64 | None = None) -> tuple[Allocation, GreedyTrace]:
    """Repeatedly give the poorest agent the remaining good that raises its
    bundle value the most.

    Ties go to the lowest agent index and lowest good id; pass ``rng`` to
    break ties uniformly at random instead. The output is EFX whenever ``v``
    is weakly well-layered.
    """
    if n < 1:
        raise ValueError("need at least one agent")
    bundles = [0] * n
    worth = [v(0)] * n
    remaining = full(v.m)
    steps = []
    rnd = 0
    while remaining:
        rnd += 1
        low = min(worth)
        i = _pick([k for k in range(n) if worth[k] == low], rng)
        gains = {g: v(bundles[i] | 1 << g) for g in members(remaining)}
        top = max(gains.values())
        g = _pick([x for x in gains if gains[x] == top], rng)
        bundles[i] |= 1 << g
        worth[i] = top
        remaining &= ~(1 << g)
        steps.append(GreedyStep(rnd, i, g, top))
    return Allocation(tuple(bundles), v.m), GreedyTrace(n, v.m, tuple(steps))


def replay(trace: GreedyTrace):
    """Yield the partial allocation after each round of ``trace``."""
    bundles = [0] * trace.n
    for step in trace.steps:
        bundles[step.agent] |= 1 << step.good
        yield step.round, Allocation(tuple(bundles), trace.m)


def first_partial_efx_failure(v: Valuation, trace: GreedyTrace) -> int | None:
    """First round after which the partial allocation is not EFX, or None."""
    for rnd, X in replay(trace):
        if not is_efx(v, X, require_complete=False):
            return rnd
    return None


def greedy_partial_efx_invariant(v: Valuation, trace: GreedyTrace) -> bool:
    return first_partial_efx_failure(v, trace) is None


def cut_and_choose(v1: Valuation, v2: Valuation, verify: bool = False) -> Allocation:
    """Agent 0 cuts with Greedy EFX on its own valuation; agent 1 takes the
    piece it weakly prefers (the second piece on a tie).

    With ``verify=True`` the result is checked against both valuations and
    :class:`VerificationError` is raised if it is not EFX.
    """
    if v1.m != v2.m:
        raise ValueError("valuations disagree on the number of goods")
    cut, _ = greedy_efx(v1, 2)
    A1, A2 = cut.bundles
    if v2(A1) > v2(A2):
        X = Allocation((A2, A1), v1.m)
    else:
        X = Allocation((A1, A2), v1.m)
    if verify:
        verdict = is_efx([v1, v2], X)
        if not verdict:
            raise VerificationError("cut-and-choose result is not EFX", verdict)
    return X
