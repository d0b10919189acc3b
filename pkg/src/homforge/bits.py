"""Random-access oracle bit strings.

A bit source stands in for an infinite binary string: a seeded SplitMix64
stream, an ASCII 0/1 file, or a literal pattern.  Access is positional and
pure: the same descriptor always yields the same bits: so sources can be
shared freely and revisited by verification passes.
"""

from __future__ import annotations

import os
from typing import Callable, Union

from .errors import InvalidInput, PrefixExhausted
from .natbits import HugeIndex

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

BitIndex = Union[int, HugeIndex]


def splitmix64(seed: int, n: int) -> int:
    """n-th 64-bit output word of SplitMix64 for the given seed.

    State for word n is seed + (n+1)*golden mod 2**64, so access is O(1)
    at any position.
    """
    z = (seed + (n + 1) * _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class BitSource:
    """Deterministic j -> bit oracle with a serializable descriptor."""

    def __init__(self, descriptor: dict, access: Callable[[BitIndex], int]):
        self.descriptor = descriptor
        self._access = access

    def __call__(self, j: BitIndex) -> int:
        return self._access(j)

    def __repr__(self):
        return f"BitSource({self.descriptor!r})"


def prng_source(seed: int) -> BitSource:
    seed &= _MASK64

    def access(j):
        if isinstance(j, HugeIndex):
            j = j.low  # exact: word index only matters mod 2**64
        word = splitmix64(seed, (j >> 6) & _MASK64)
        return (word >> (j & 63)) & 1

    return BitSource({"prng": {"seed": seed}}, access)


def literal_source(pattern: str) -> BitSource:
    if pattern == "ones":
        return BitSource({"literal": "ones"}, lambda j: 1)
    if pattern == "zeros":
        return BitSource({"literal": "zeros"}, lambda j: 0)
    if not pattern or set(pattern) - {"0", "1"}:
        raise InvalidInput(f"literal pattern must be 'ones', 'zeros' or a 0/1 string: {pattern!r}")
    bits = [int(c) for c in pattern]

    def access(j):
        if isinstance(j, HugeIndex):
            raise PrefixExhausted(f">=2**{64}")
        if j >= len(bits):
            raise PrefixExhausted(j)
        return bits[j]

    return BitSource({"literal": pattern}, access)


def file_source(path: str) -> BitSource:
    if not os.path.exists(path):
        raise InvalidInput(f"bit file not found: {path}")
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read()
    bits = [int(c) for c in text if not c.isspace()]
    if any(b not in (0, 1) for b in bits):
        raise InvalidInput(f"bit file {path} contains characters other than 0/1/whitespace")

    def access(j):
        if isinstance(j, HugeIndex):
            raise PrefixExhausted(f">=2**{64}")
        if j >= len(bits):
            raise PrefixExhausted(j)
        return bits[j]

    return BitSource({"file": path}, access)


def complement(src: BitSource) -> BitSource:
    """Pointwise 1 - bit; errors pass through.  Double complement unwraps."""
    desc = src.descriptor
    if isinstance(desc, dict) and set(desc) == {"complement"}:
        inner = desc["complement"]
        return from_descriptor(inner)
    return BitSource({"complement": desc}, lambda j: 1 - src(j))


def bit_at(src: BitSource, j: BitIndex) -> int:
    return src(j)


def from_descriptor(desc: dict) -> BitSource:
    if not isinstance(desc, dict) or len(desc) != 1:
        raise InvalidInput(f"bad bit-source descriptor: {desc!r}")
    (kind, arg), = desc.items()
    if kind == "prng":
        if not isinstance(arg, dict) or not isinstance(arg.get("seed"), int):
            raise InvalidInput(f"bad prng descriptor: {arg!r}")
        return prng_source(arg["seed"])
    if kind == "literal":
        return literal_source(arg)
    if kind == "file":
        return file_source(arg)
    if kind == "complement":
        return complement(from_descriptor(arg))
    raise InvalidInput(f"unknown bit-source kind: {kind!r}")


def parse_spec(text: str) -> BitSource:
    """CLI shorthand: prng:42, literal:zeros, literal:0110, file:PATH."""
    kind, sep, arg = text.partition(":")
    if not sep:
        raise InvalidInput(f"bit spec needs KIND:ARG, got {text!r}")
    if kind == "prng":
        try:
            return prng_source(int(arg, 0))
        except ValueError:
            raise InvalidInput(f"prng seed must be an integer: {arg!r}") from None
    if kind == "literal":
        return literal_source(arg)
    if kind == "file":
        return file_source(arg)
    if kind == "complement":
        return complement(parse_spec(arg))
    raise InvalidInput(f"unknown bit spec kind: {kind!r}")
