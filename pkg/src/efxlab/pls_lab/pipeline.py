"""Flip -> Kneser -> EFX -> back to Flip, end to end."""

from __future__ import annotations

import dataclasses

from .. import limits
from ..allocation import Allocation, brute_force_efx, leximinpp_local_search
from ..errors import ReductionError
from .problems import FlipInstance, KneserInstance
from .reductions import ReductionArtifact, flip_to_kneser, kneser_to_efx, map_back_flip, map_back_kneser

MAX_P = 5


@dataclasses.dataclass(frozen=True, eq=False)
class PipelineResult:
    u: int
    kneser_point: int
    allocation: Allocation
    solver_steps: int
    flip_to_kneser: ReductionArtifact
    kneser_max: KneserInstance
    kneser_to_efx: ReductionArtifact
    verified: bool

    def to_json(self) -> dict:
        p = self.flip_to_kneser.backmap["length"]
        return {
            "u": [self.u >> i & 1 for i in range(p)],
            "kneser_point": [self.kneser_point >> i & 1 for i in range(2 * p + 1)],
            "allocation": self.allocation.to_json(),
            "solver_steps": self.solver_steps,
            "verified": self.verified,
        }


def end_to_end(flip: FlipInstance, solver: str = "local") -> PipelineResult:
    """Solve a Flip instance through the EFX reduction chain.

    ``solver`` is ``"local"`` (leximin++ local search) or ``"brute"``
    (first EFX allocation by enumeration). Each back-map re-verifies local
    optimality, so a returned result is always a Flip local minimum.
    """
    limits.require("pipeline: Flip inputs", flip.n, MAX_P)
    art1 = flip_to_kneser(flip)
    kmax = art1.target.negated()
    art2 = kneser_to_efx(kmax)
    v = art2.target.common
    if solver == "local":
        sol = leximinpp_local_search(v, 2)
        if not sol.is_efx:
            raise ReductionError(f"reduced valuation reported non-monotone: {sol.violation}")
        X, steps = sol.allocation, sol.steps
    elif solver == "brute":
        found = brute_force_efx(v, 2)
        if not found:
            raise ReductionError("no EFX allocation of the reduced instance")
        X, steps = found[0], 0
    else:
        raise ValueError(f"unknown solver {solver!r}")
    s = map_back_kneser(X, kmax)
    u = map_back_flip(s, flip)
    verified = all(flip.cost(u ^ 1 << i) >= flip.cost(u) for i in range(flip.n))
    return PipelineResult(u, s, X, steps, art1, kmax, art2, verified)
