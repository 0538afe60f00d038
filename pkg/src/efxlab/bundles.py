"""Bundles are plain ``int`` bitmasks: good ``g`` is in bundle ``S`` iff bit
``g`` of ``S`` is set. Values are exact: ``int`` or ``fractions.Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Union

from .errors import ParseError

Value = Union[int, Fraction]
Bundle = int


def bundle(goods: Iterable[int]) -> Bundle:
    bits = 0
    for g in goods:
        if g < 0:
            raise ValueError(f"negative good id {g}")
        bits |= 1 << g
    return bits


def members(bits: Bundle) -> list[int]:
    out = []
    g = 0
    while bits:
        if bits & 1:
            out.append(g)
        bits >>= 1
        g += 1
    return out


def iter_members(bits: Bundle) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def full(m: int) -> Bundle:
    return (1 << m) - 1


def size(bits: Bundle) -> int:
    return bin(bits).count("1")


def check_width(bits: Bundle, m: int) -> None:
    if bits < 0 or bits >> m:
        raise ValueError(f"bundle {bits:#x} has goods outside [0, {m})")


def subsets(bits: Bundle) -> Iterator[Bundle]:
    """All subsets of ``bits``, in increasing numeric order."""
    sub = 0
    while True:
        yield sub
        if sub == bits:
            return
        sub = (sub - bits) & bits


def subsets_of_size(bits: Bundle, k: int) -> Iterator[Bundle]:
    for sub in subsets(bits):
        if size(sub) == k:
            yield sub


def normalize(x: Value) -> Value:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def parse_value(raw) -> Value:
    """Parse an exact value: an integer, or a string ``"num/den"`` / ``"n"``."""
    if isinstance(raw, bool):
        raise ParseError(f"not a number: {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, Fraction):
        return normalize(raw)
    if isinstance(raw, str):
        try:
            return normalize(Fraction(raw.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not an exact rational: {raw!r}") from exc
    raise ParseError(f"expected integer or 'num/den' string, got {raw!r}")


def dump_value(x: Value):
    x = normalize(x)
    if isinstance(x, int):
        return x
    return f"{x.numerator}/{x.denominator}"


def fmt_bundle(bits: Bundle, names: str | None = None) -> str:
    goods = members(bits)
    if names:
        return "{" + ",".join(names[g] for g in goods) + "}"
    return "{" + ",".join(map(str, goods)) + "}"
