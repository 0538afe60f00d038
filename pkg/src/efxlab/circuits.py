"""Boolean circuits with little-endian multi-bit integer outputs.

A circuit is a topologically ordered gate list; gate ``k`` may only read
gates ``< k``. Inputs are bit vectors given either as an ``int`` (bit ``i``
is input ``i``) or as a sequence of 0/1.
"""

from __future__ import annotations

import dataclasses
import re
from typing import Iterable, Sequence

from .errors import ParseError

ARITY = {"INPUT": 1, "CONST": 1, "NOT": 1, "AND": 2, "OR": 2, "XOR": 2}


@dataclasses.dataclass(frozen=True)
class BoolCircuit:
    n_inputs: int
    gates: tuple[tuple[str, tuple[int, ...]], ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple((op, tuple(args)) for op, args in self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        for k, (op, args) in enumerate(self.gates):
            if op not in ARITY or len(args) != ARITY[op]:
                raise ValueError(f"gate {k}: bad gate {op}{args}")
            if op == "INPUT":
                if not 0 <= args[0] < self.n_inputs:
                    raise ValueError(f"gate {k}: input index {args[0]} out of range")
            elif op == "CONST":
                if args[0] not in (0, 1):
                    raise ValueError(f"gate {k}: constant must be 0 or 1")
            elif any(not 0 <= a < k for a in args):
                raise ValueError(f"gate {k}: reference not to an earlier gate")
        if not self.outputs:
            raise ValueError("circuit needs at least one output")
        if any(not 0 <= o < len(self.gates) for o in self.outputs):
            raise ValueError("output refers to a missing gate")

    @property
    def width(self) -> int:
        """Number of output bits."""
        return len(self.outputs)

    @property
    def max_value(self) -> int:
        return (1 << self.width) - 1

    def __call__(self, x) -> int:
        return evaluate(self, x)

    def to_json(self) -> dict:
        return {
            "inputs": self.n_inputs,
            "gates": [{"op": op, "args": list(args)} for op, args in self.gates],
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoolCircuit":
        try:
            gates = tuple((g["op"].upper(), tuple(int(a) for a in g["args"])) for g in obj["gates"])
            return cls(int(obj["inputs"]), gates, tuple(int(o) for o in obj["outputs"]))
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise ParseError(f"bad circuit JSON: {exc}") from exc


def _as_int(x, width: int) -> int:
    if isinstance(x, int):
        if x < 0 or x >> width:
            raise ValueError(f"input {x:#b} wider than {width} bits")
        return x
    bits = list(x)
    if len(bits) != width:
        raise ValueError(f"expected {width} input bits, got {len(bits)}")
    out = 0
    for i, b in enumerate(bits):
        if b not in (0, 1, True, False):
            raise ValueError(f"input bit {i} is {b!r}")
        out |= int(b) << i
    return out


def evaluate(c: BoolCircuit, x) -> int:
    """Single forward pass; returns ``sum(y_i * 2**i)``."""
    x = _as_int(x, c.n_inputs)
    wire = [0] * len(c.gates)
    for k, (op, args) in enumerate(c.gates):
        if op == "INPUT":
            wire[k] = x >> args[0] & 1
        elif op == "CONST":
            wire[k] = args[0]
        elif op == "NOT":
            wire[k] = wire[args[0]] ^ 1
        elif op == "AND":
            wire[k] = wire[args[0]] & wire[args[1]]
        elif op == "OR":
            wire[k] = wire[args[0]] | wire[args[1]]
        else:
            wire[k] = wire[args[0]] ^ wire[args[1]]
    out = 0
    for i, ref in enumerate(c.outputs):
        out |= wire[ref] << i
    return out


def evaluate_batch(c: BoolCircuit, xs: Sequence[int]) -> list[int]:
    """Evaluate many inputs at once, one bit lane per input."""
    count = len(xs)
    if count == 0:
        return []
    mask = (1 << count) - 1
    lanes = []
    for i in range(c.n_inputs):
        word = 0
        for j, x in enumerate(xs):
            word |= (x >> i & 1) << j
        lanes.append(word)
    wire = [0] * len(c.gates)
    for k, (op, args) in enumerate(c.gates):
        if op == "INPUT":
            wire[k] = lanes[args[0]]
        elif op == "CONST":
            wire[k] = mask if args[0] else 0
        elif op == "NOT":
            wire[k] = ~wire[args[0]] & mask
        elif op == "AND":
            wire[k] = wire[args[0]] & wire[args[1]]
        elif op == "OR":
            wire[k] = wire[args[0]] | wire[args[1]]
        else:
            wire[k] = wire[args[0]] ^ wire[args[1]]
    results = [0] * count
    for i, ref in enumerate(c.outputs):
        word = wire[ref]
        while word:
            low = word & -word
            results[low.bit_length() - 1] |= 1 << i
            word ^= low
    return results


class CircuitBuilder:
    """Gate-level construction with word (little-endian ref list) helpers."""

    def __init__(self, n_inputs: int):
        self.n_inputs = n_inputs
        self.gates: list[tuple[str, tuple[int, ...]]] = []
        self.inputs = [self._add("INPUT", (i,)) for i in range(n_inputs)]
        self._consts: dict[int, int] = {}

    def _add(self, op: str, args: tuple[int, ...]) -> int:
        self.gates.append((op, args))
        return len(self.gates) - 1

    def const(self, bit: int) -> int:
        if bit not in self._consts:
            self._consts[bit] = self._add("CONST", (bit,))
        return self._consts[bit]

    def not_(self, a: int) -> int:
        return self._add("NOT", (a,))

    def and_(self, a: int, b: int) -> int:
        return self._add("AND", (a, b))

    def or_(self, a: int, b: int) -> int:
        return self._add("OR", (a, b))

    def xor(self, a: int, b: int) -> int:
        return self._add("XOR", (a, b))

    def any_(self, bits: Sequence[int]) -> int:
        """Balanced OR tree; the empty OR is 0."""
        bits = list(bits)
        if not bits:
            return self.const(0)
        while len(bits) > 1:
            nxt = [self.or_(bits[i], bits[i + 1]) for i in range(0, len(bits) - 1, 2)]
            if len(bits) % 2:
                nxt.append(bits[-1])
            bits = nxt
        return bits[0]

    def word(self, value: int, width: int) -> list[int]:
        return [self.const(value >> i & 1) for i in range(width)]

    def _pad(self, a: list[int], b: list[int]):
        w = max(len(a), len(b))
        zero = self.const(0) if len(a) != len(b) else None
        return a + [zero] * (w - len(a)), b + [zero] * (w - len(b))

    def add(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        """Ripple-carry sum, one bit wider than the wider operand."""
        a, b = self._pad(list(a), list(b))
        out = []
        carry = None
        for x, y in zip(a, b):
            s = self.xor(x, y)
            if carry is None:
                out.append(s)
                carry = self.and_(x, y)
            else:
                out.append(self.xor(s, carry))
                carry = self.or_(self.and_(x, y), self.and_(s, carry))
        out.append(carry if carry is not None else self.const(0))
        return out

    def eq(self, a: Sequence[int], b: Sequence[int]) -> int:
        a, b = self._pad(list(a), list(b))
        return self.not_(self.any_([self.xor(x, y) for x, y in zip(a, b)]))

    def lt(self, a: Sequence[int], b: Sequence[int]) -> int:
        """Unsigned ``a < b``, rippled from the least significant bit."""
        a, b = self._pad(list(a), list(b))
        res = self.const(0)
        for x, y in zip(a, b):
            here = self.and_(self.not_(x), y)
            same = self.not_(self.xor(x, y))
            res = self.or_(here, self.and_(same, res))
        return res

    def mux(self, sel: int, a: Sequence[int], b: Sequence[int]) -> list[int]:
        """``b`` if ``sel`` else ``a``."""
        a, b = self._pad(list(a), list(b))
        nsel = self.not_(sel)
        return [self.or_(self.and_(nsel, x), self.and_(sel, y)) for x, y in zip(a, b)]

    def min_(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        return self.mux(self.lt(b, a), a, b)

    def popcount(self, bits: Sequence[int]) -> list[int]:
        words = [[r] for r in bits]
        if not words:
            return [self.const(0)]
        while len(words) > 1:
            nxt = [self.add(words[i], words[i + 1]) for i in range(0, len(words) - 1, 2)]
            if len(words) % 2:
                nxt.append(words[-1])
            words = nxt
        width = len(bits).bit_length()
        return (words[0] + [self.const(0)] * width)[:width]

    def hamming(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        a, b = self._pad(list(a), list(b))
        return self.popcount([self.xor(x, y) for x, y in zip(a, b)])

    def embed(self, c: BoolCircuit, inputs: Sequence[int]) -> list[int]:
        """Splice a copy of ``c`` reading ``inputs``; returns its output refs."""
        if len(inputs) != c.n_inputs:
            raise ValueError(f"circuit takes {c.n_inputs} inputs, got {len(inputs)}")
        remap = []
        for op, args in c.gates:
            if op == "INPUT":
                remap.append(inputs[args[0]])
            elif op == "CONST":
                remap.append(self.const(args[0]))
            else:
                remap.append(self._add(op, tuple(remap[a] for a in args)))
        return [remap[o] for o in c.outputs]

    def build(self, outputs: Sequence[int]) -> BoolCircuit:
        return BoolCircuit(self.n_inputs, tuple(self.gates), tuple(outputs))


def _two_words(w: int):
    b = CircuitBuilder(2 * w)
    return b, b.inputs[:w], b.inputs[w:]


def identity(w: int) -> BoolCircuit:
    b = CircuitBuilder(w)
    return b.build(b.inputs)


def adder(w: int) -> BoolCircuit:
    """Inputs ``a`` (bits 0..w-1) and ``b`` (bits w..2w-1); output ``a + b``."""
    b, x, y = _two_words(w)
    return b.build(b.add(x, y))


def comparator_lt(w: int) -> BoolCircuit:
    b, x, y = _two_words(w)
    return b.build([b.lt(x, y)])


def equality(w: int) -> BoolCircuit:
    b, x, y = _two_words(w)
    return b.build([b.eq(x, y)])


def mux(w: int) -> BoolCircuit:
    """Inputs ``a``, ``b`` (w bits each) then the select bit; output ``sel ? b : a``."""
    b = CircuitBuilder(2 * w + 1)
    return b.build(b.mux(b.inputs[2 * w], b.inputs[:w], b.inputs[w : 2 * w]))


def min_of(w: int) -> BoolCircuit:
    b, x, y = _two_words(w)
    return b.build(b.min_(x, y))


def hamming_distance(w: int) -> BoolCircuit:
    b, x, y = _two_words(w)
    return b.build(b.hamming(x, y))


def const_k(k: int, w: int, n_inputs: int = 0) -> BoolCircuit:
    if k < 0 or k >> w:
        raise ValueError(f"{k} does not fit in {w} bits")
    b = CircuitBuilder(n_inputs)
    return b.build(b.word(k, w))


def negate_outputs(c: BoolCircuit) -> BoolCircuit:
    """Output becomes ``2**width - 1 - c(x)``, turning maximization into
    minimization and back."""
    b = CircuitBuilder(c.n_inputs)
    outs = b.embed(c, b.inputs)
    return b.build([b.not_(o) for o in outs])


def negate_inputs(c: BoolCircuit) -> BoolCircuit:
    b = CircuitBuilder(c.n_inputs)
    return b.build(b.embed(c, [b.not_(r) for r in b.inputs]))


def compose(outer: BoolCircuit, inner: Sequence[BoolCircuit]) -> BoolCircuit:
    """Feed the concatenated outputs of ``inner`` (all reading the same input
    vector) into ``outer``."""
    if not inner:
        raise ValueError("compose needs at least one inner circuit")
    n = inner[0].n_inputs
    if any(c.n_inputs != n for c in inner):
        raise ValueError("inner circuits must share an input width")
    total = sum(c.width for c in inner)
    if total != outer.n_inputs:
        raise ValueError(f"inner outputs give {total} bits, outer takes {outer.n_inputs}")
    b = CircuitBuilder(n)
    wires: list[int] = []
    for c in inner:
        wires.extend(b.embed(c, b.inputs))
    return b.build(b.embed(outer, wires))


_DSL_LINE = re.compile(r"^\s*(\w+)\s*=\s*(\w+)\s+(.*?)\s*$")


def parse_dsl(text: str) -> BoolCircuit:
    """Parse lines like ``g5 = AND g1 g3``; ``INPUT`` and ``CONST`` take an
    integer argument. An ``outputs a b ...`` line lists the output wires
    (least significant first); an optional ``inputs N`` line fixes the
    input width. ``#`` starts a comment."""
    names: dict[str, int] = {}
    gates = []
    outputs = None
    n_inputs = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "outputs":
            try:
                outputs = [names[r] for r in rest]
            except KeyError as exc:
                raise ParseError(f"line {lineno}: unknown wire {exc}") from exc
            continue
        if head == "inputs":
            try:
                n_inputs = int(rest[0])
            except (IndexError, ValueError) as exc:
                raise ParseError(f"line {lineno}: bad inputs line") from exc
            continue
        match = _DSL_LINE.match(line)
        if not match:
            raise ParseError(f"line {lineno}: cannot parse {raw!r}")
        name, op, argtext = match.groups()
        op = op.upper()
        if op not in ARITY:
            raise ParseError(f"line {lineno}: unknown gate {op}")
        args = argtext.split()
        if len(args) != ARITY[op]:
            raise ParseError(f"line {lineno}: {op} takes {ARITY[op]} argument(s)")
        if name in names:
            raise ParseError(f"line {lineno}: wire {name} redefined")
        try:
            if op in ("INPUT", "CONST"):
                refs = (int(args[0]),)
            else:
                refs = tuple(names[a] for a in args)
        except (KeyError, ValueError) as exc:
            raise ParseError(f"line {lineno}: bad argument {exc}") from exc
        names[name] = len(gates)
        gates.append((op, refs))
    if outputs is None:
        raise ParseError("missing 'outputs' line")
    if n_inputs is None:
        n_inputs = 1 + max((a[0] for op, a in gates if op == "INPUT"), default=-1)
    try:
        return BoolCircuit(n_inputs, tuple(gates), tuple(outputs))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def to_dsl(c: BoolCircuit) -> str:
    lines = [f"inputs {c.n_inputs}"]
    for k, (op, args) in enumerate(c.gates):
        if op in ("INPUT", "CONST"):
            lines.append(f"g{k} = {op} {args[0]}")
        else:
            lines.append(f"g{k} = {op} " + " ".join(f"g{a}" for a in args))
    lines.append("outputs " + " ".join(f"g{o}" for o in c.outputs))
    return "\n".join(lines) + "\n"


def random_circuit(rng, n_inputs: int, n_gates: int, width: int) -> BoolCircuit:
    """Random circuit: inputs, then ``n_gates`` logic gates over earlier
    wires, with the last ``width`` wires as outputs."""
    gates: list[tuple[str, tuple[int, ...]]] = [("INPUT", (i,)) for i in range(n_inputs)]
    ops = ("AND", "OR", "XOR", "NOT")
    for _ in range(n_gates):
        op = rng.choice(ops)
        k = len(gates)
        if op == "NOT":
            gates.append((op, (rng.randbelow(k),)))
        else:
            gates.append((op, (rng.randbelow(k), rng.randbelow(k))))
    width = min(width, len(gates))
    return BoolCircuit(n_inputs, tuple(gates), tuple(range(len(gates) - width, len(gates))))


def bits_of(x: int, width: int) -> list[int]:
    return [x >> i & 1 for i in range(width)]


def from_bits(bits: Iterable[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))
