"""Flip -> Kneser -> two-agent EFX reductions, their back-maps, and the
lift from two agents to ``n`` identical agents."""

from __future__ import annotations

import dataclasses

from ..allocation import Allocation, Instance
from ..bundles import Bundle, full, members, size
from ..circuits import BoolCircuit, CircuitBuilder, evaluate, evaluate_batch
from ..errors import ReductionError
from ..valuations import Valuation, register_json_type, valuation_from_json
from .problems import MAXIMIZE, MINIMIZE, FlipInstance, KneserInstance


@dataclasses.dataclass(frozen=True, eq=False)
class ReductionArtifact:
    """Target instance plus a description of how solutions map back."""

    target: object
    backmap: dict

    def to_json(self) -> dict:
        return {"target": self.target.to_json(), "backmap": dict(self.backmap)}


def big_m(flip: FlipInstance) -> int:
    """Smallest power of two exceeding every type-(1)/(2) Kneser cost
    ``2 * C_F + 1``."""
    return 2 * flip.circuit.max_value + 2


def kneser_cost_circuit(flip: FlipInstance) -> BoolCircuit:
    """Gate-level Kneser cost on ``s = u v b`` (``u``, ``v`` of length p):

    * ``2 * C_F(u)`` if ``v`` is the complement of ``u`` and ``b = 0``;
    * ``2 * min(C_F(~u), C_F(v)) + 1`` if ``v`` is one flip away from ``~u`` and ``b = 1``;
    * ``BIG_M + hamming(~u, v)`` otherwise.
    """
    p = flip.n
    cf = flip.circuit
    M = big_m(flip)
    width = (M + 2 * p + 1).bit_length()
    b = CircuitBuilder(2 * p + 1)
    u, v, last = b.inputs[:p], b.inputs[p : 2 * p], b.inputs[2 * p]
    nu = [b.not_(r) for r in u]
    dist = b.hamming(nu, v)
    nlast = b.not_(last)
    type1 = b.and_(b.eq(dist, b.word(0, len(dist))), nlast)
    type2 = b.and_(b.eq(dist, b.word(1, len(dist))), last)

    cost1 = [b.const(0)] + b.embed(cf, u)
    cost2 = [b.const(1)] + b.min_(b.embed(cf, nu), b.embed(cf, v))
    cost3 = b.add(b.word(M, width), dist)[:width]
    out = b.mux(type1, b.mux(type2, cost3, cost2), cost1)
    out = (out + [b.const(0)] * width)[:width]
    return b.build(out)


def flip_to_kneser(flip: FlipInstance) -> ReductionArtifact:
    """Kneser minimization instance with ``k = p`` whose local minima all
    have the form ``u ~u 0`` with ``u`` a Flip local minimum."""
    if flip.direction != MINIMIZE:
        raise ValueError("Flip instances are minimization problems")
    target = KneserInstance(kneser_cost_circuit(flip), flip.n, MINIMIZE)
    return ReductionArtifact(target, {"kind": "prefix", "length": flip.n, "big_m": big_m(flip)})


class KneserValuation(Valuation):
    """Integer-scaled valuation on ``2k + 1`` goods built from a Kneser
    maximization circuit ``C`` with ``Cmax = 2**width - 1`` and scale
    ``S = 2**Cmax``:

    ``2S|X|`` below size ``k``, ``2Sk - 2**(Cmax - C(X))`` at size ``k``,
    ``2Sk`` above. Monotone and submodular.
    """

    def __init__(self, circuit: BoolCircuit, k: int):
        if circuit.n_inputs != 2 * k + 1:
            raise ValueError(f"circuit needs {2 * k + 1} inputs")
        self.circuit = circuit
        self.k = k
        self.m = 2 * k + 1
        self.cmax = circuit.max_value
        self.scale = 1 << self.cmax

    def _from_cost(self, card: int, cost) -> int:
        if card < self.k:
            return 2 * self.scale * card
        if card > self.k:
            return 2 * self.scale * self.k
        return 2 * self.scale * self.k - (1 << (self.cmax - cost))

    def _value(self, X: Bundle) -> int:
        card = size(X)
        cost = evaluate(self.circuit, X) if card == self.k else None
        return self._from_cost(card, cost)

    def _build_table(self):
        everything = list(range(1 << self.m))
        sized = [X for X in everything if size(X) == self.k]
        costs = dict(zip(sized, evaluate_batch(self.circuit, sized)))
        return [self._from_cost(size(X), costs.get(X)) for X in everything]

    def value(self, X: Bundle) -> int:
        if self.m <= 16:
            if X < 0 or X >> self.m:
                raise ValueError(f"bundle {X:#x} has goods outside [0, {self.m})")
            return self.table()[X]
        return super().value(X)

    __call__ = value

    def to_json(self) -> dict:
        return {"type": "kneser_efx", "k": self.k, "circuit": self.circuit.to_json()}


def kneser_to_efx(kneser: KneserInstance) -> ReductionArtifact:
    """Two identical agents sharing :class:`KneserValuation`; an EFX
    allocation always splits the goods ``k`` / ``k + 1`` and the size-``k``
    bundle is a Kneser local maximum."""
    if kneser.direction != MAXIMIZE:
        raise ValueError("kneser_to_efx needs a maximization instance; negate the outputs first")
    inst = Instance.identical_agents(KneserValuation(kneser.circuit, kneser.k), 2)
    return ReductionArtifact(inst, {"kind": "size-k-bundle", "k": kneser.k})


def map_back_kneser(X: Allocation, kneser: KneserInstance) -> int:
    """The size-``k`` bundle of an EFX allocation, checked to be a local optimum."""
    if X.n != 2 or X.m != kneser.n:
        raise ReductionError(f"expected a 2-agent allocation of {kneser.n} goods")
    picks = [B for B in X.bundles if size(B) == kneser.k]
    if not picks:
        raise ReductionError(
            f"bundle sizes {[size(B) for B in X.bundles]}: neither has size k={kneser.k}"
        )
    x = picks[0]
    if not kneser.is_local_optimum(x):
        raise ReductionError("size-k bundle is not a Kneser local optimum")
    return x


def map_back_flip(s: int, flip: FlipInstance) -> int:
    """``u ~u 0 -> u``, checked to be a Flip local minimum."""
    p = flip.n
    mask = full(p)
    u, v, last = s & mask, s >> p & mask, s >> 2 * p
    if last not in (0, 1) or s >> (2 * p + 1):
        raise ReductionError("point wider than 2p+1 bits")
    dist = size((~u & mask) ^ v)
    if dist == 1 and last == 1:
        raise ReductionError("type-(2) point u v 1 is never locally minimal")
    if dist != 0 or last != 0:
        raise ReductionError("type-(3) point is never locally minimal")
    if not flip.is_local_optimum(u):
        raise ReductionError("recovered u is not a Flip local minimum")
    return u


class LiftedValuation(Valuation):
    """``u'(S) = u(S ∩ M) + (u(M) + 1) * |S ∩ G|`` over ``M ∪ G`` with
    ``|G| = extra``; the new goods are ids ``m .. m + extra - 1``."""

    def __init__(self, base: Valuation, extra: int):
        self.base = base
        self.extra = extra
        self.m = base.m + extra
        self.bonus = base(full(base.m)) + 1

    def _value(self, S: Bundle):
        low = S & full(self.base.m)
        return self.base(low) + self.bonus * size(S >> self.base.m)

    def to_json(self) -> dict:
        return {"type": "lifted", "base": self.base.to_json(), "extra": self.extra}


@dataclasses.dataclass(frozen=True, eq=False)
class Lift:
    instance: Instance
    m: int

    def map_back(self, X: Allocation) -> Allocation:
        return map_back_lift(X, self.m)

    def to_json(self) -> dict:
        return ReductionArtifact(self.instance, {"kind": "drop-singletons", "m": self.m, "n": self.instance.n}).to_json()


def lift_two_to_n(v: Valuation, n: int) -> Lift:
    """``n``-agent identical instance whose EFX allocations give each new
    good to its own agent and an EFX split of the original goods to the
    remaining two."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2:
        return Lift(Instance.identical_agents(v, 2), v.m)
    return Lift(Instance.identical_agents(LiftedValuation(v, n - 2), n), v.m)


def map_back_lift(X: Allocation, m: int) -> Allocation:
    extra = X.m - m
    if X.n != extra + 2:
        raise ReductionError(f"expected {extra + 2} bundles, got {X.n}")
    singles = {1 << (m + i) for i in range(extra)}
    rest = [B for B in X.bundles if B not in singles]
    if len(rest) != 2 or any(B >> m for B in rest):
        raise ReductionError("lifted allocation does not isolate each added good")
    return Allocation(tuple(rest), m)


def _load_kneser(obj):
    return KneserValuation(BoolCircuit.from_json(obj["circuit"]), int(obj["k"]))


def _load_lifted(obj):
    return LiftedValuation(valuation_from_json(obj["base"]), int(obj["extra"]))


register_json_type("kneser_efx", _load_kneser)
register_json_type("lifted", _load_lifted)
